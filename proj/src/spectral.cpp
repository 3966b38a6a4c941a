#include "pointspec/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "pointspec/errors.hpp"
#include "pointspec/numerics.hpp"

namespace pointspec {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

Eigen::MatrixXd pair_distances(const PointMeasure& mu) {
  const Eigen::Index n = mu.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double r = (mu.sites.row(j) - mu.sites.row(k)).norm();
      d(j, k) = r;
      d(k, j) = r;
    }
  return d;
}

// Assembles M(alpha) from a precomputed distance matrix; the upper triangle
// is evaluated once and mirrored.
Eigen::MatrixXd assemble(const SchroedingerProblem& problem,
                         const Eigen::MatrixXd& dist, double alpha) {
  const KernelParams params{problem.dim(), problem.epsilon, alpha};
  const Eigen::Index n = problem.measure.size();
  const double diag = green_eval(params, 0.0);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    m(j, j) = 1.0 / problem.measure.couplings(j) + diag;
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double g = green_eval(params, dist(j, k));
      m(j, k) = g;
      m(k, j) = g;
    }
  }
  return m;
}

Eigen::VectorXd sorted_branches(const SchroedingerProblem& problem,
                                const Eigen::MatrixXd& dist, double alpha) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      assemble(problem, dist, alpha), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double check_alpha_range(const SchroedingerProblem& problem, double alpha) {
  const double cap = alpha_cap(problem.epsilon);
  if (!(alpha > 0.0) || !(alpha < cap))
    throw std::domain_error("alpha outside (0, alpha_cap) for this epsilon");
  return cap;
}

// Radial integral of (1+p^2)^2 / (eps^2 p^4 + p^2 + alpha)^2 over R^d, split
// into [0,1] plus a 1/p-substituted tail so both pieces are finite ranges.
double bound_integral(int dim, double epsilon, double alpha) {
  const double e2 = epsilon * epsilon;
  const auto head = [&](double p) {
    const double p2 = p * p;
    const double den = e2 * p2 * p2 + p2 + alpha;
    const double num = 1.0 + p2;
    return num * num / (den * den) * std::pow(p, dim - 1);
  };
  const auto tail = [&](double u) {
    const double u2 = u * u;
    const double den = e2 + u2 + alpha * u2 * u2;
    const double num = 1.0 + u2;
    return num * num / (den * den) * std::pow(u, 3 - dim);
  };
  const double surface = (dim == 1) ? 2.0 : (dim == 2 ? 2.0 * kPi : 4.0 * kPi);
  const double i1 = adaptive_simpson(head, 0.0, 1.0, 1e-10);
  const double i2 = adaptive_simpson(tail, 0.0, 1.0, 1e-10);
  return surface * (i1 + i2);
}

struct BranchRoot {
  double alpha;
  int branch;
};

}  // namespace

void validate(const SchroedingerProblem& problem) {
  if (!(problem.epsilon > 0.0))
    throw std::domain_error("SchroedingerProblem: epsilon must be positive");
  if (problem.measure.size() < 1)
    throw std::domain_error("SchroedingerProblem: empty measure");
}

Eigen::MatrixXd bs_matrix(const SchroedingerProblem& problem, double alpha) {
  validate(problem);
  check_alpha_range(problem, alpha);
  return assemble(problem, pair_distances(problem.measure), alpha);
}

Eigen::VectorXd branch_eigenvalues(const SchroedingerProblem& problem,
                                   double alpha) {
  validate(problem);
  check_alpha_range(problem, alpha);
  return sorted_branches(problem, pair_distances(problem.measure), alpha);
}

double det_lambda(const SchroedingerProblem& problem, double alpha) {
  validate(problem);
  check_alpha_range(problem, alpha);
  const Eigen::MatrixXd dist = pair_distances(problem.measure);
  const KernelParams params{problem.dim(), problem.epsilon, alpha};
  const Eigen::Index n = problem.measure.size();
  const double diag = green_eval(params, 0.0);
  Eigen::MatrixXd lam(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double g = (j == k) ? diag : green_eval(params, dist(j, k));
      lam(j, k) = ((j == k) ? 1.0 : 0.0) + problem.measure.couplings(k) * g;
    }
  return lam.partialPivLu().determinant();
}

BranchCurve branch_curve(const SchroedingerProblem& problem,
                         const Eigen::VectorXd& alpha_grid) {
  validate(problem);
  const Eigen::Index n = problem.measure.size();
  const Eigen::Index n_grid = alpha_grid.size();
  if (n_grid < 1) throw std::domain_error("branch_curve: empty alpha grid");
  for (Eigen::Index i = 0; i + 1 < n_grid; ++i)
    if (!(alpha_grid(i) < alpha_grid(i + 1)))
      throw std::domain_error("branch_curve: alpha grid must increase");

  const Eigen::MatrixXd dist = pair_distances(problem.measure);
  BranchCurve curve;
  curve.alpha_grid = alpha_grid;
  curve.branch_values.resize(n_grid, n);
  for (Eigen::Index i = 0; i < n_grid; ++i)
    curve.branch_values.row(i) =
        sorted_branches(problem, dist, alpha_grid(i)).transpose();

  // Sorted branches of a pointwise-decreasing symmetric family decrease; a
  // sampled increase beyond noise means the scan cannot be trusted.
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index i = 0; i + 1 < n_grid; ++i) {
      const double slack = 1e-9 * (1.0 + std::abs(curve.branch_values(i, b)));
      if (curve.branch_values(i + 1, b) > curve.branch_values(i, b) + slack)
        throw BranchConsistencyError(
            "branch " + std::to_string(b) + " not decreasing near alpha=" +
            std::to_string(alpha_grid(i)));
    }
  return curve;
}

double bs_norm_bound(const SchroedingerProblem& problem, double alpha) {
  validate(problem);
  if (!(alpha > 0.0)) throw std::domain_error("bs_norm_bound: alpha > 0");
  return total_variation(problem.measure) *
         std::sqrt(bound_integral(problem.dim(), problem.epsilon, alpha));
}

SearchWindow search_window(const SchroedingerProblem& problem) {
  validate(problem);
  const double cap = alpha_cap(problem.epsilon);
  const auto bound = [&](double a) { return bs_norm_bound(problem, a); };

  if (bound(cap) >= 1.0) return {cap, true};

  // Doubling to bracket the (monotone decreasing) bound around 1, then
  // bisection. The returned upper end guarantees bound(alpha0) < 1.
  double hi = std::min(1.0, cap);
  double lo = 0.0;
  while (bound(hi) >= 1.0) {
    lo = hi;
    hi = std::min(2.0 * hi, cap);
  }
  if (lo == 0.0) {
    // Already below 1 at the first probe; shrink toward zero for a tight
    // window.
    lo = hi;
    while (lo > 1e-12 && bound(0.5 * lo) < 1.0) lo *= 0.5;
    return {lo, false};
  }
  for (int it = 0; it < 80 && (hi - lo) > 1e-4 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) >= 1.0 ? lo : hi) = mid;
  }
  return {hi, false};
}

SpectrumResult find_spectrum(const SchroedingerProblem& problem,
                             const SolveOptions& opts) {
  validate(problem);
  const Eigen::Index n = problem.measure.size();
  const Eigen::MatrixXd dist = pair_distances(problem.measure);
  const SearchWindow win = search_window(problem);

  SpectrumResult result;
  result.truncated = win.truncated;
  result.alpha_min_used = opts.alpha_min;
  result.alpha_max_used = win.alpha0;
  result.options_used = opts;
  if (!(win.alpha0 > opts.alpha_min)) return result;

  const double decades = std::log10(win.alpha0 / opts.alpha_min);
  const int n_grid =
      std::max(2, static_cast<int>(std::ceil(decades * opts.grid_per_decade)) + 1);
  Eigen::VectorXd alphas(n_grid);
  for (int i = 0; i < n_grid; ++i)
    alphas(i) = opts.alpha_min *
                std::pow(win.alpha0 / opts.alpha_min,
                         static_cast<double>(i) / (n_grid - 1));

  const Eigen::MatrixXd branches =
      branch_curve(problem, alphas).branch_values;

  std::vector<BranchRoot> roots;
  for (Eigen::Index b = 0; b < n; ++b) {
    if (branches(0, b) < 0.0) {
      ++result.near_threshold_unresolved;
      continue;
    }
    if (branches(0, b) == 0.0) {
      roots.push_back({alphas(0), static_cast<int>(b)});
      continue;
    }
    int bracket = -1;
    for (int i = 0; i + 1 < n_grid; ++i) {
      if (branches(i, b) > 0.0 && branches(i + 1, b) <= 0.0) {
        bracket = i;
        break;
      }
    }
    if (bracket < 0) continue;  // branch stays positive: no root in window
    double lo = alphas(bracket);
    double hi = alphas(bracket + 1);
    while ((hi - lo) > opts.tol_root * hi) {
      const double mid = 0.5 * (lo + hi);
      const double v = sorted_branches(problem, dist, mid)(b);
      (v > 0.0 ? lo : hi) = mid;
    }
    roots.push_back({0.5 * (lo + hi), static_cast<int>(b)});
  }

  std::sort(roots.begin(), roots.end(),
            [](const BranchRoot& a, const BranchRoot& b) { return a.alpha < b.alpha; });

  for (std::size_t i = 0; i < roots.size();) {
    std::size_t j = i + 1;
    double acc = roots[i].alpha;
    while (j < roots.size() &&
           roots[j].alpha - roots[j - 1].alpha <= opts.tol_cluster * roots[j].alpha) {
      acc += roots[j].alpha;
      ++j;
    }
    const int mult = static_cast<int>(j - i);
    const double alpha_star = acc / mult;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        assemble(problem, dist, alpha_star));
    // The kernel basis is the multiplicity-many eigenvectors of smallest
    // magnitude eigenvalue.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k;
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b2) {
      return std::abs(es.eigenvalues()(a)) < std::abs(es.eigenvalues()(b2));
    });
    EigenvalueEntry entry;
    entry.alpha_star = alpha_star;
    entry.multiplicity = mult;
    entry.kernel_basis.resize(n, mult);
    entry.max_residual = 0.0;
    for (int c = 0; c < mult; ++c) {
      entry.kernel_basis.col(c) = es.eigenvectors().col(order[static_cast<std::size_t>(c)]);
      entry.max_residual = std::max(
          entry.max_residual,
          std::abs(es.eigenvalues()(order[static_cast<std::size_t>(c)])));
    }
    result.eigenvalues.push_back(std::move(entry));
    i = j;
  }
  return result;
}

EigenfunctionSet eigenfunction(const SchroedingerProblem& problem,
                               const EigenvalueEntry& entry,
                               const Eigen::MatrixXd& eval_points,
                               const QuadratureGrid& quadrature) {
  validate(problem);
  if (eval_points.cols() != problem.dim() ||
      quadrature.points.cols() != problem.dim())
    throw std::domain_error("eigenfunction: point dimension mismatch");
  if (quadrature.points.rows() != quadrature.weights.size())
    throw std::domain_error("eigenfunction: quadrature shape mismatch");
  const KernelParams params{problem.dim(), problem.epsilon, entry.alpha_star};

  const auto evaluate = [&](const Eigen::MatrixXd& pts) -> Eigen::MatrixXd {
    Eigen::MatrixXd vals(entry.multiplicity, pts.rows());
    for (Eigen::Index q = 0; q < pts.rows(); ++q) {
      Eigen::VectorXd g(problem.measure.size());
      for (Eigen::Index k = 0; k < problem.measure.size(); ++k)
        g(k) = green_eval(params,
                          (pts.row(q) - problem.measure.sites.row(k)).norm());
      vals.col(q) = entry.kernel_basis.transpose() * g;
    }
    return vals;
  };

  const Eigen::MatrixXd quad_vals = evaluate(quadrature.points);
  EigenfunctionSet set;
  set.norms.resize(entry.multiplicity);
  for (int v = 0; v < entry.multiplicity; ++v) {
    const double norm2 =
        (quad_vals.row(v).transpose().array().square() *
         quadrature.weights.array())
            .sum();
    if (!(norm2 > 0.0))
      throw std::runtime_error("eigenfunction: vanishing norm on quadrature grid");
    set.norms(v) = std::sqrt(norm2);
  }
  set.values = evaluate(eval_points);
  for (int v = 0; v < entry.multiplicity; ++v) set.values.row(v) /= set.norms(v);
  return set;
}

Eigen::VectorXd circulant_eigenvalues(const Eigen::VectorXd& first_row) {
  const Eigen::Index n = first_row.size();
  Eigen::VectorXd ev(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
      acc += first_row(k) * std::cos(2.0 * kPi * m * k / n);
    ev(m) = acc;
  }
  return ev;
}

}  // namespace pointspec
