#include "pointspec/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pointspec/numerics.hpp"
#include "pointspec/specfun.hpp"

namespace pointspec {

namespace {

void validate(const CircleSpec& spec) {
  if (!(spec.radius > 0.0) || !(spec.gamma > 0.0))
    throw std::domain_error("CircleSpec: radius and gamma must be positive");
}

}  // namespace

std::optional<double> circle_eigenvalue(int l, const CircleSpec& spec) {
  validate(spec);
  if (l < 0) throw std::domain_error("circle_eigenvalue: l >= 0");
  const double gr = spec.gamma * spec.radius;
  // I_l K_l is strictly decreasing with sup 1/(2l) at 0+ for l >= 1, so a
  // root of gr * I_l K_l = 1 exists iff gr/(2l) > 1. For l = 0 the product
  // diverges logarithmically at 0+ and a root always exists.
  if (l >= 1 && !(gr > 2.0 * l)) return std::nullopt;

  const auto f = [&](double z) { return gr * ik_product(l, z) - 1.0; };

  double lo = 1e-12;
  while (f(lo) <= 0.0) {
    // Shallow l = 0 state: push the bracket toward zero until the log
    // divergence wins or the root leaves the representable range.
    lo *= 1e-12;
    if (lo < 1e-280) return std::nullopt;
  }
  double hi = std::max(2.0 * lo, 1.0);
  while (f(hi) >= 0.0) hi *= 2.0;

  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) / spec.radius;
}

CircleSpectrum circle_spectrum(const CircleSpec& spec) {
  validate(spec);
  if (spec.gamma * spec.radius / 2.0 > BesselOrder::kCap)
    throw std::range_error(
        "circle_spectrum: gamma R / 2 = " +
        std::to_string(spec.gamma * spec.radius / 2.0) +
        " exceeds the Bessel order cap " + std::to_string(BesselOrder::kCap) +
        "; raise the cap to enumerate this spectrum");
  CircleSpectrum out;
  for (int l = 0;; ++l) {
    const auto kappa = circle_eigenvalue(l, spec);
    if (!kappa) break;
    out.levels.push_back(
        {l, *kappa, -(*kappa) * (*kappa), l == 0 ? 1 : 2});
  }
  return out;
}

double radial_defect(int l, const CircleSpec& spec, double kappa) {
  validate(spec);
  if (l < 0) throw std::domain_error("radial_defect: l >= 0");
  if (!(kappa > 0.0)) throw std::domain_error("radial_defect: kappa > 0");
  const double R = spec.radius;
  const double k2 = kappa * kappa;

  // -u'' - u'/r + (l^2/r^2) u = -kappa^2 u away from the shell.
  const auto rhs = [&](double r, const Eigen::Vector2d& y) {
    Eigen::Vector2d dy;
    dy(0) = y(1);
    dy(1) = -y(1) / r + (static_cast<double>(l) * l / (r * r) + k2) * y(0);
    return dy;
  };

  OdeOptions opt;
  opt.initial_step = 1e-5 * R;

  // Outward branch: any solution regular at the origin; integrating in the
  // growing direction washes out the seed error.
  const double r0 = 1e-3 * R;
  Eigen::Vector2d yo(std::pow(r0, l), l * std::pow(r0, std::max(l - 1, 0)));
  if (l == 0) yo << 1.0, 0.0;
  yo = integrate_rk45(rhs, r0, R, yo, opt);

  // Inward branch: start far enough out that the decayed seed slope error
  // is negligible at the shell.
  const double r1 = R + 20.0 / kappa;
  Eigen::Vector2d yi(1.0, -kappa - 0.5 / r1);
  yi = integrate_rk45(rhs, r1, R, yi, opt);

  if (yo(0) == 0.0 || yi(0) == 0.0)
    throw std::runtime_error("radial_defect: vanishing radial value at shell");
  const double jump = yi(1) / yi(0) - yo(1) / yo(0) + spec.gamma;
  return jump / (spec.gamma + kappa + 1.0 / R);
}

}  // namespace pointspec
