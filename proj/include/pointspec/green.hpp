#pragma once

namespace pointspec {

/// Parameters of the kernel g_{eps,alpha} of (-Laplacian + eps^2 Laplacian^2
/// + alpha)^{-1} in dimension dim.
struct KernelParams {
  int dim;         // 1, 2 or 3
  double epsilon;  // >= 0
  double alpha;    // > 0
};

/// Throws std::domain_error unless dim in {1,2,3}, alpha > 0, epsilon >= 0.
void validate(const KernelParams& params);

/// Coefficients of the partial-fraction split of the kernel symbol,
///   1/(eps^2 p^4 + p^2 + alpha)
///     = c_eps/(p^2 + alpha_eps) - c_eps/(p^2 + beta_eps).
struct Decomposition {
  double c_eps;
  double alpha_eps;
  double beta_eps;
};

/// Requires epsilon > 0 and 4 eps^2 alpha < 1 (real roots); otherwise throws
/// DecompositionDomainError (std::domain_error for epsilon == 0).
Decomposition decompose(const KernelParams& params);

/// Free-Laplacian kernel g_{0,alpha}(r). Requires r > 0 for dim 2, 3;
/// throws SingularityError at the on-diagonal singularity.
double free_green(int dim, double alpha, double r);

/// g_{eps,alpha}(r) via the decomposition, including the finite analytic
/// value at r = 0.
double green_eval(const KernelParams& params, double r);

/// Kernel symbol 1/(eps^2 p^4 + p^2 + alpha); defined for epsilon >= 0.
double green_hat(const KernelParams& params, double p);

/// Largest admissible spectral shift for the decomposition-based evaluation,
/// (1 - delta)/(4 eps^2) with delta = 1e-6.
double alpha_cap(double epsilon);

}  // namespace pointspec
