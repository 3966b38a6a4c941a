#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

namespace pointspec {

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double m, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over the finite interval [a, b].
/// The tolerance is rel_tol times a coarse estimate of the integral,
/// floored at abs_floor.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol = 1e-12,
                        double abs_floor = 0.0, int max_depth = 30) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double tol = std::max(abs_floor, rel_tol * std::abs(whole));
  if (tol <= 0.0) tol = 1e-300;
  return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

struct OdeOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-14;
  double initial_step = 1e-4;
  long max_steps = 4000000;
};

/// Dormand-Prince 5(4) with step control, integrating y' = f(t, y) from t0 to
/// t1 (either direction). State is a 2-vector (value, derivative systems).
template <class Deriv>
Eigen::Vector2d integrate_rk45(Deriv&& f, double t0, double t1,
                               Eigen::Vector2d y, const OdeOptions& opt = {}) {
  using V = Eigen::Vector2d;
  if (t0 == t1) return y;
  const double dir = (t1 > t0) ? 1.0 : -1.0;
  double t = t0;
  double h = dir * std::min(std::abs(opt.initial_step), std::abs(t1 - t0));
  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opt.max_steps)
      throw std::runtime_error("integrate_rk45: step budget exhausted");
    if (dir * (t + h - t1) > 0.0) h = t1 - t;

    const V k1 = f(t, y);
    const V k2 = f(t + h / 5.0, V(y + h * (k1 / 5.0)));
    const V k3 = f(t + 3.0 * h / 10.0, V(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2)));
    const V k4 = f(t + 4.0 * h / 5.0,
                   V(y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3)));
    const V k5 = f(t + 8.0 * h / 9.0,
                   V(y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                              64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4)));
    const V k6 = f(t + h,
                   V(y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                              46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                              5103.0 / 18656.0 * k5)));
    const V y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 +
                          125.0 / 192.0 * k4 - 2187.0 / 6784.0 * k5 +
                          11.0 / 84.0 * k6);
    const V k7 = f(t + h, y5);
    const V y4 = y + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 +
                          393.0 / 640.0 * k4 - 92097.0 / 339200.0 * k5 +
                          187.0 / 2100.0 * k6 + 1.0 / 40.0 * k7);

    const double scale =
        opt.abs_tol + opt.rel_tol * std::max(y.cwiseAbs().maxCoeff(),
                                             y5.cwiseAbs().maxCoeff());
    const double err = (y5 - y4).cwiseAbs().maxCoeff() / scale;
    if (err <= 1.0) {
      t += h;
      y = y5;
    }
    const double factor =
        (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::min(5.0, std::max(0.2, factor));
    if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
      throw std::runtime_error("integrate_rk45: step size underflow");
  }
  return y;
}

}  // namespace pointspec
