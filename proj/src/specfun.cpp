#include "pointspec/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pointspec {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kPi = 3.14159265358979323846264338327950288;

void check_order(int l) {
  if (l < 0) throw std::domain_error("bessel order must be nonnegative");
  if (l > BesselOrder::kCap)
    throw std::domain_error("bessel order exceeds cap " +
                            std::to_string(BesselOrder::kCap));
}

// Ascending series for K_0, K_1 on z <= 2 (scaled by e^z on return).
void k01_series(double z, double& k0s, double& k1s) {
  const double w = 0.25 * z * z;
  const double lz = std::log(0.5 * z);
  double t0 = 1.0;  // w^k / (k!)^2
  double t1 = 1.0;  // w^k / (k! (k+1)!)
  double i0 = 1.0;
  double i1s = 1.0;  // I_1 = (z/2) * sum
  double s0 = 0.0;   // sum H_k w^k/(k!)^2
  double s1 = 1.0 - 2.0 * kEulerGamma;  // sum [psi(k+1)+psi(k+2)] w^k/(k!(k+1)!)
  double hk = 0.0;
  for (int k = 1; k <= 60; ++k) {
    t0 *= w / (static_cast<double>(k) * k);
    t1 *= w / (static_cast<double>(k) * (k + 1));
    hk += 1.0 / k;
    const double hk1 = hk + 1.0 / (k + 1);
    i0 += t0;
    i1s += t1;
    s0 += t0 * hk;
    s1 += t1 * (hk + hk1 - 2.0 * kEulerGamma);
    if (t0 < 1e-18 * i0 && t1 < 1e-18 * i1s) break;
  }
  const double i1 = 0.5 * z * i1s;
  const double k0 = -(lz + kEulerGamma) * i0 + s0;
  const double k1 = 1.0 / z + lz * i1 - 0.25 * z * s1;
  const double ez = std::exp(z);
  k0s = k0 * ez;
  k1s = k1 * ez;
}

// Steed's continued fraction (CF2) for order 0 at z > 2, directly in the
// scaled normalization e^z K.
void k01_cf2(double z, double& k0s, double& k1s) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double b = 2.0 * (1.0 + z);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= 20000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels) < eps * std::abs(s)) {
      k0s = std::sqrt(kPi / (2.0 * z)) / s;
      k1s = k0s * (z + 0.5 - a1 * h) / z;
      return;
    }
  }
  throw std::runtime_error("bessel_k: CF2 failed to converge");
}

}  // namespace

BesselOrder::BesselOrder(int order) : l(order) { check_order(order); }

double bessel_i_scaled(int l, double z) {
  check_order(l);
  if (z < 0.0) throw std::domain_error("bessel_i: z must be nonnegative");
  if (z == 0.0) return l == 0 ? 1.0 : 0.0;

  // Miller's downward recurrence, normalized through
  // e^{-z} (I_0 + 2 sum_{k>=1} I_k) = 1.
  const int start = std::max(l, static_cast<int>(std::ceil(z))) + 60;
  double above = 0.0;
  double cur = 1.0;
  double sum = 0.0;
  double target = 0.0;
  bool have_target = false;
  for (int k = start;; --k) {
    if (k == l) {
      target = cur;
      have_target = true;
    }
    sum += (k == 0) ? cur : 2.0 * cur;
    if (k == 0) break;
    const double below = above + (2.0 * k / z) * cur;
    above = cur;
    cur = below;
    if (cur > 1e250) {
      cur *= 1e-250;
      above *= 1e-250;
      sum *= 1e-250;
      if (have_target) target *= 1e-250;
    }
  }
  return target / sum;
}

double bessel_i(int l, double z) {
  const double scaled = bessel_i_scaled(l, z);
  if (z > 690.0 && (scaled <= 0.0 || z + std::log(scaled) > 709.0))
    throw std::range_error("bessel_i: overflow, use bessel_i_scaled");
  return scaled * std::exp(z);
}

double bessel_k_scaled(int l, double z) {
  check_order(l);
  if (!(z > 0.0)) throw std::domain_error("bessel_k: z must be positive");
  double k0s;
  double k1s;
  if (z <= 2.0)
    k01_series(z, k0s, k1s);
  else
    k01_cf2(z, k0s, k1s);
  if (l == 0) return k0s;
  if (l == 1) return k1s;
  double km = k0s;
  double kc = k1s;
  for (int j = 1; j < l; ++j) {
    const double kn = km + (2.0 * j / z) * kc;
    if (std::isinf(kn))
      throw std::range_error("bessel_k_scaled: overflow at requested order");
    km = kc;
    kc = kn;
  }
  return kc;
}

double bessel_k(int l, double z) {
  const double scaled = bessel_k_scaled(l, z);
  const double lnv = std::log(scaled) - z;
  if (lnv < -707.5)
    throw std::range_error("bessel_k: underflow, use bessel_k_scaled");
  if (lnv > 709.0)
    throw std::range_error("bessel_k: overflow, use bessel_k_scaled");
  return scaled * std::exp(-z);
}

double ik_product(int l, double z) {
  check_order(l);
  if (!(z > 0.0)) throw std::domain_error("ik_product: z must be positive");
  if (l == 0) return bessel_i_scaled(0, z) * bessel_k_scaled(0, z);

  // Direct product of the scaled factors whenever both stay inside the
  // double range.
  const double ln_il = l * std::log(0.5 * z) - std::lgamma(l + 1.0);
  if (ln_il > -660.0) return bessel_i_scaled(l, z) * bessel_k_scaled(l, z);

  // Deep small-z regime: the leading parts of the two ascending series give
  // I_l K_l = S_I * S_K / (2l); the neglected log terms are O((z/2)^{2l}).
  const double w = 0.25 * z * z;
  double si = 1.0;
  double t = 1.0;
  for (int k = 1; k <= 200; ++k) {
    t *= w / (static_cast<double>(k) * (l + k));
    si += t;
    if (t < 1e-18 * si) break;
  }
  double sk = 1.0;
  t = 1.0;
  for (int k = 0; k <= l - 2; ++k) {
    t *= -w / (static_cast<double>(k + 1) * (l - k - 1));
    sk += t;
  }
  return si * sk / (2.0 * l);
}

}  // namespace pointspec
