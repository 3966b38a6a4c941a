#include "pointspec/green.hpp"

#include <cmath>
#include <string>

#include "pointspec/errors.hpp"
#include "pointspec/specfun.hpp"

namespace pointspec {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// K_0 with graceful underflow to 0 for large argument; the kernel difference
// formulas only ever need the value, never its log.
double k0_value(double x) {
  return bessel_k_scaled(0, x) * std::exp(-x);
}

}  // namespace

void validate(const KernelParams& params) {
  if (params.dim < 1 || params.dim > 3)
    throw std::domain_error("KernelParams: dim must be 1, 2 or 3");
  if (!(params.alpha > 0.0))
    throw std::domain_error("KernelParams: alpha must be positive");
  if (!(params.epsilon >= 0.0))
    throw std::domain_error("KernelParams: epsilon must be nonnegative");
}

double alpha_cap(double epsilon) {
  if (!(epsilon > 0.0))
    throw std::domain_error("alpha_cap: epsilon must be positive");
  return (1.0 - 1e-6) / (4.0 * epsilon * epsilon);
}

Decomposition decompose(const KernelParams& params) {
  validate(params);
  if (params.epsilon == 0.0)
    throw std::domain_error(
        "decompose: epsilon must be positive (use free_green at epsilon=0)");
  const double e2 = params.epsilon * params.epsilon;
  const double disc = 1.0 - 4.0 * e2 * params.alpha;
  if (!(disc > 0.0))
    throw DecompositionDomainError(
        "decompose: requires 4 eps^2 alpha < 1 (got " +
        std::to_string(4.0 * e2 * params.alpha) + ")");
  const double s = std::sqrt(disc);
  Decomposition d;
  d.c_eps = 1.0 / s;
  d.alpha_eps = 2.0 * params.alpha / (1.0 + s);
  d.beta_eps = (1.0 + s) / (2.0 * e2);
  return d;
}

double free_green(int dim, double alpha, double r) {
  if (dim < 1 || dim > 3) throw std::domain_error("free_green: bad dim");
  if (!(alpha > 0.0)) throw std::domain_error("free_green: alpha must be positive");
  if (r < 0.0) throw std::domain_error("free_green: negative radius");
  const double sa = std::sqrt(alpha);
  switch (dim) {
    case 1:
      return std::exp(-sa * r) / (2.0 * sa);
    case 2:
      if (r == 0.0)
        throw SingularityError("free_green: logarithmic singularity at r=0 in d=2");
      return k0_value(sa * r) / (2.0 * kPi);
    default:
      if (r == 0.0)
        throw SingularityError("free_green: Coulomb singularity at r=0 in d=3");
      return std::exp(-sa * r) / (4.0 * kPi * r);
  }
}

double green_eval(const KernelParams& params, double r) {
  if (r < 0.0) throw std::domain_error("green_eval: negative radius");
  const Decomposition d = decompose(params);
  const double c = d.c_eps;
  const double a = std::sqrt(d.alpha_eps);
  const double b = std::sqrt(d.beta_eps);
  // beta - alpha = sqrt(1-4e^2 alpha)/e^2 exactly; keep the difference in
  // this cancellation-free form.
  const double bma = (d.beta_eps - d.alpha_eps) / (a + b);  // b - a

  switch (params.dim) {
    case 1: {
      if (r == 0.0) return c * bma / (2.0 * a * b);
      return c * (std::exp(-a * r) / (2.0 * a) - std::exp(-b * r) / (2.0 * b));
    }
    case 2: {
      if (r == 0.0)
        return c / (4.0 * kPi) *
               std::log1p((d.beta_eps - d.alpha_eps) / d.alpha_eps);
      return c / (2.0 * kPi) * (k0_value(a * r) - k0_value(b * r));
    }
    default: {
      if (r < 1e-12) {
        // Second-order expansion of (e^{-ar} - e^{-br})/r.
        const double d1 = bma;
        const double d2 = d.beta_eps - d.alpha_eps;          // b^2 - a^2
        const double d3 = bma * (b * b + a * b + a * a);     // b^3 - a^3
        return c / (4.0 * kPi) * (d1 - 0.5 * d2 * r + d3 * r * r / 6.0);
      }
      return c * std::exp(-a * r) * (-std::expm1(-bma * r)) / (4.0 * kPi * r);
    }
  }
}

double green_hat(const KernelParams& params, double p) {
  validate(params);
  if (p < 0.0) throw std::domain_error("green_hat: p must be nonnegative");
  const double p2 = p * p;
  return 1.0 / (params.epsilon * params.epsilon * p2 * p2 + p2 + params.alpha);
}

}  // namespace pointspec
