#pragma once

#include <Eigen/Core>
#include <vector>

#include "pointspec/green.hpp"
#include "pointspec/measure.hpp"

namespace pointspec {

/// A point-measure Hamiltonian -Laplacian + eps^2 Laplacian^2 + mu.
struct SchroedingerProblem {
  PointMeasure measure;
  double epsilon;  // > 0

  int dim() const { return measure.dim; }
};

void validate(const SchroedingerProblem& problem);

/// Interaction matrix M(alpha)_jk = delta_jk / c_k + g_{eps,alpha}(x_j - x_k),
/// exactly symmetric by construction; -alpha is an eigenvalue of the
/// Hamiltonian iff M(alpha) is singular.
Eigen::MatrixXd bs_matrix(const SchroedingerProblem& problem, double alpha);

/// Eigenvalues of M(alpha) in nondecreasing order.
Eigen::VectorXd branch_eigenvalues(const SchroedingerProblem& problem,
                                   double alpha);

/// det(delta_jk + c_k g_{eps,alpha}(x_j - x_k))
///   = prod_k c_k * det M(alpha).
double det_lambda(const SchroedingerProblem& problem, double alpha);

/// Sorted eigenvalue branches of M(alpha) sampled along a grid; the root
/// localization scans these curves. Every branch is strictly decreasing.
struct BranchCurve {
  Eigen::VectorXd alpha_grid;     // increasing positive
  Eigen::MatrixXd branch_values;  // row i = sorted eigenvalues at alpha_grid(i)
};

/// Samples the branches and verifies the monotone-decrease invariant;
/// throws BranchConsistencyError on a violation beyond rounding noise.
BranchCurve branch_curve(const SchroedingerProblem& problem,
                         const Eigen::VectorXd& alpha_grid);

/// ||mu|| (integral over R^d of (1+p^2)^2 / (eps^2 p^4 + p^2 + alpha)^2)^{1/2};
/// when < 1 no eigenvalue -alpha' with alpha' >= alpha exists.
double bs_norm_bound(const SchroedingerProblem& problem, double alpha);

struct SearchWindow {
  double alpha0;   // all eigenvalues satisfy alpha* < alpha0
  bool truncated;  // bound never dropped below 1 inside the admissible regime
};

/// Smallest alpha0 (by doubling and bisection on the monotone bound) with
/// bs_norm_bound < 1, clipped at alpha_cap with the truncation flag.
SearchWindow search_window(const SchroedingerProblem& problem);

struct SolveOptions {
  int grid_per_decade = 64;
  double tol_root = 1e-10;     // relative bisection width
  double tol_cluster = 1e-6;   // relative clustering of degenerate roots
  double alpha_min = 1e-8;     // search floor; closer-to-threshold roots are
                               // reported as unresolved
  double tol_residual = 1e-8;  // documented kernel-vector residual bound
};

struct EigenvalueEntry {
  double alpha_star;           // eigenvalue is -alpha_star
  int multiplicity;
  Eigen::MatrixXd kernel_basis;  // N x multiplicity, orthonormal columns
  double max_residual;           // max ||M(alpha*) h|| / ||h|| over the basis
};

struct SpectrumResult {
  std::vector<EigenvalueEntry> eigenvalues;  // ascending alpha_star
  bool truncated = false;
  double alpha_min_used = 0.0;
  double alpha_max_used = 0.0;
  int near_threshold_unresolved = 0;  // branches negative already at alpha_min
  SolveOptions options_used;

  int total_multiplicity() const {
    int s = 0;
    for (const auto& e : eigenvalues) s += e.multiplicity;
    return s;
  }
};

/// Scans the sorted eigenvalue branches of M(alpha) on a log grid over
/// [alpha_min, min(alpha0, alpha_cap)], refines each sign change by bisection
/// and clusters nearly coincident roots into multiplicities.
SpectrumResult find_spectrum(const SchroedingerProblem& problem,
                             const SolveOptions& opts = {});

struct QuadratureGrid {
  Eigen::MatrixXd points;   // Q x dim
  Eigen::VectorXd weights;  // Q
};

struct EigenfunctionSet {
  Eigen::MatrixXd values;  // multiplicity x n_eval_points, L2-normalized rows
  Eigen::VectorXd norms;   // raw L2 norms on the quadrature grid
};

/// f_h(x) = sum_k h_k g_{eps,alpha*}(|x - x_k|) for each kernel vector h,
/// normalized numerically on the supplied quadrature grid.
EigenfunctionSet eigenfunction(const SchroedingerProblem& problem,
                               const EigenvalueEntry& entry,
                               const Eigen::MatrixXd& eval_points,
                               const QuadratureGrid& quadrature);

/// Eigenvalues of the symmetric circulant matrix with the given first row,
/// from the discrete Fourier closed form (independent of the dense path).
Eigen::VectorXd circulant_eigenvalues(const Eigen::VectorXd& first_row);

}  // namespace pointspec
