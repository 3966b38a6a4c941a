#include "pointspec/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace pointspec {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2.0 * kPi;

// 53-bit uniform in [0, 1), independent of distribution implementations.
double next_unit(std::uint64_t& state) {
  // splitmix64 step
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t x = state;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Inverse-CDF sampler over a piecewise-constant approximation of |density|.
struct DensityTable {
  std::vector<double> cdf;  // cumulative panel masses, normalized
  double lo, hi;
  int panels;

  template <class F>
  DensityTable(F&& density, double a, double b, int n_panels)
      : lo(a), hi(b), panels(n_panels) {
    cdf.resize(n_panels);
    const double h = (b - a) / n_panels;
    double acc = 0.0;
    for (int i = 0; i < n_panels; ++i) {
      const double mid = a + (i + 0.5) * h;
      const double v = std::abs(density(mid));
      if (!std::isfinite(v))
        throw std::domain_error("sample_random: density not finite");
      acc += v * h;
      cdf[i] = acc;
    }
    if (!(acc > 0.0) || !std::isfinite(acc))
      throw std::domain_error("sample_random: spec is not normalizable");
    for (double& c : cdf) c /= acc;
  }

  double sample(double u) const {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const int i = static_cast<int>(it - cdf.begin());
    const double prev = (i == 0) ? 0.0 : cdf[i - 1];
    const double frac = (cdf[i] > prev) ? (u - prev) / (cdf[i] - prev) : 0.5;
    const double h = (hi - lo) / panels;
    return lo + (i + frac) * h;
  }
};

// Accumulate raw samples into a measure, merging sites closer than kSepTol.
PointMeasure merge_sites(int dim, const std::vector<Eigen::VectorXd>& raw,
                         double coupling_each) {
  std::vector<Eigen::VectorXd> sites;
  std::vector<double> couplings;
  for (const auto& x : raw) {
    bool merged = false;
    for (std::size_t j = 0; j < sites.size(); ++j) {
      if ((sites[j] - x).norm() <= kSepTol) {
        couplings[j] += coupling_each;
        merged = true;
        break;
      }
    }
    if (!merged) {
      sites.push_back(x);
      couplings.push_back(coupling_each);
    }
  }
  Eigen::MatrixXd s(static_cast<Eigen::Index>(sites.size()), dim);
  Eigen::VectorXd c(static_cast<Eigen::Index>(sites.size()));
  for (std::size_t j = 0; j < sites.size(); ++j) {
    s.row(static_cast<Eigen::Index>(j)) = sites[j].transpose();
    c(static_cast<Eigen::Index>(j)) = couplings[j];
  }
  return make_point_measure(dim, std::move(s), std::move(c));
}

}  // namespace

PointMeasure make_point_measure(int dim, Eigen::MatrixXd sites,
                                Eigen::VectorXd couplings) {
  if (dim < 1 || dim > 3)
    throw std::domain_error("PointMeasure: dim must be 1, 2 or 3");
  if (sites.rows() != couplings.size() || couplings.size() < 1)
    throw std::domain_error("PointMeasure: sites/couplings shape mismatch");
  if (sites.cols() != dim)
    throw std::domain_error("PointMeasure: site dimension mismatch");
  for (Eigen::Index j = 0; j < couplings.size(); ++j) {
    if (couplings(j) == 0.0 || !std::isfinite(couplings(j)))
      throw std::domain_error("PointMeasure: couplings must be nonzero");
  }
  for (Eigen::Index j = 0; j < sites.rows(); ++j)
    for (Eigen::Index k = j + 1; k < sites.rows(); ++k)
      if ((sites.row(j) - sites.row(k)).norm() <= kSepTol)
        throw std::domain_error("PointMeasure: sites closer than sep_tol");
  PointMeasure mu;
  mu.dim = dim;
  mu.sites = std::move(sites);
  mu.couplings = std::move(couplings);
  return mu;
}

double total_variation(const PointMeasure& mu) {
  return mu.couplings.cwiseAbs().sum();
}

std::complex<double> fourier(const PointMeasure& mu, const Eigen::VectorXd& p) {
  if (p.size() != mu.dim)
    throw std::domain_error("fourier: p dimension mismatch");
  const double norm = std::pow(kTwoPi, -0.5 * mu.dim);
  std::complex<double> acc(0.0, 0.0);
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    const double phase = p.dot(mu.sites.row(j));
    acc += mu.couplings(j) * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return norm * acc;
}

double weak_distance(const PointMeasure& mu1, const PointMeasure& mu2,
                     const Eigen::MatrixXd& p_grid) {
  if (mu1.dim != mu2.dim)
    throw std::domain_error("weak_distance: dimension mismatch");
  if (p_grid.cols() != mu1.dim || p_grid.rows() == 0)
    throw std::domain_error("weak_distance: bad p grid");
  double best = 0.0;
  for (Eigen::Index r = 0; r < p_grid.rows(); ++r) {
    const Eigen::VectorXd p = p_grid.row(r).transpose();
    best = std::max(best, std::abs(fourier(mu1, p) - fourier(mu2, p)));
  }
  return best;
}

MeasureSpec uniform_interval_measure(double a, double b, double density) {
  if (!(a < b)) throw std::domain_error("interval measure: requires a < b");
  IntervalMeasure m;
  m.a = a;
  m.b = b;
  m.density = [density](double) { return density; };
  m.const_density = density;
  m.label = "uniform_interval";
  return MeasureSpec{m};
}

PointMeasure discretize_circle(double radius, double gamma, int n) {
  if (!(radius > 0.0)) throw std::domain_error("discretize_circle: radius > 0");
  if (!(gamma > 0.0)) throw std::domain_error("discretize_circle: gamma > 0");
  if (n < 1) throw std::domain_error("discretize_circle: n >= 1");
  Eigen::MatrixXd sites(n, 2);
  for (int k = 0; k < n; ++k) {
    const double theta = kTwoPi * k / n;
    sites(k, 0) = radius * std::cos(theta);
    sites(k, 1) = radius * std::sin(theta);
  }
  Eigen::VectorXd couplings =
      Eigen::VectorXd::Constant(n, -gamma * kTwoPi * radius / n);
  PointMeasure mu = make_point_measure(2, std::move(sites), std::move(couplings));
  mu.spec_echo = "circle R=" + std::to_string(radius) +
                 " gamma=" + std::to_string(gamma) + " N=" + std::to_string(n);
  return mu;
}

PointMeasure discretize_curve(const CurveMeasure& curve, int n) {
  if (n < 1) throw std::domain_error("discretize_curve: n >= 1");
  if (!(curve.length > 0.0) || !std::isfinite(curve.length))
    throw std::domain_error("discretize_curve: zero or non-finite length");
  const double h = curve.length / n;
  Eigen::MatrixXd sites(n, curve.dim);
  Eigen::VectorXd couplings(n);
  for (int k = 0; k < n; ++k) {
    const double s = (k + 0.5) * h;
    sites.row(k) = curve.position(s).transpose();
    couplings(k) = curve.density(s) * h;
  }
  PointMeasure mu =
      make_point_measure(curve.dim, std::move(sites), std::move(couplings));
  mu.spec_echo = "curve " + curve.label + " N=" + std::to_string(n);
  return mu;
}

PointMeasure discretize_interval(const IntervalMeasure& interval, int n) {
  if (n < 1) throw std::domain_error("discretize_interval: n >= 1");
  if (!(interval.a < interval.b))
    throw std::domain_error("discretize_interval: requires a < b");
  const double h = (interval.b - interval.a) / n;
  Eigen::MatrixXd sites(n, 1);
  Eigen::VectorXd couplings(n);
  for (int k = 0; k < n; ++k) {
    const double x = interval.a + (k + 0.5) * h;
    sites(k, 0) = x;
    couplings(k) = interval.density(x) * h;
  }
  PointMeasure mu = make_point_measure(1, std::move(sites), std::move(couplings));
  mu.spec_echo = "interval [" + std::to_string(interval.a) + "," +
                 std::to_string(interval.b) + "] N=" + std::to_string(n);
  return mu;
}

PointMeasure discretize(const MeasureSpec& spec, int n) {
  return std::visit(
      [n](const auto& m) -> PointMeasure {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CircleMeasure>)
          return discretize_circle(m.radius, m.gamma, n);
        else if constexpr (std::is_same_v<T, CurveMeasure>)
          return discretize_curve(m, n);
        else if constexpr (std::is_same_v<T, IntervalMeasure>)
          return discretize_interval(m, n);
        else
          return m;
      },
      spec.spec);
}

PointMeasure sample_random(const MeasureSpec& spec, int n, double a,
                           std::uint64_t seed) {
  if (n < 1) throw std::domain_error("sample_random: n >= 1");
  if (a == 0.0) throw std::domain_error("sample_random: mass a must be nonzero");
  std::uint64_t state = seed;
  const double each = a / n;
  std::vector<Eigen::VectorXd> raw;
  raw.reserve(n);

  PointMeasure mu = std::visit(
      [&](const auto& m) -> PointMeasure {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CircleMeasure>) {
          for (int j = 0; j < n; ++j) {
            const double theta = kTwoPi * next_unit(state);
            Eigen::VectorXd x(2);
            x << m.radius * std::cos(theta), m.radius * std::sin(theta);
            raw.push_back(x);
          }
          return merge_sites(2, raw, each);
        } else if constexpr (std::is_same_v<T, CurveMeasure>) {
          DensityTable table(m.density, 0.0, m.length, 8192);
          for (int j = 0; j < n; ++j) {
            const double s = table.sample(next_unit(state));
            raw.push_back(m.position(s));
          }
          return merge_sites(m.dim, raw, each);
        } else if constexpr (std::is_same_v<T, IntervalMeasure>) {
          DensityTable table(m.density, m.a, m.b, 8192);
          for (int j = 0; j < n; ++j) {
            Eigen::VectorXd x(1);
            x << table.sample(next_unit(state));
            raw.push_back(x);
          }
          return merge_sites(1, raw, each);
        } else {
          // Categorical sampling proportional to |c_j|; repeated draws merge.
          const double tv = total_variation(m);
          if (!(tv > 0.0))
            throw std::domain_error("sample_random: spec is not normalizable");
          std::vector<double> cdf(m.size());
          double acc = 0.0;
          for (Eigen::Index j = 0; j < m.size(); ++j) {
            acc += std::abs(m.couplings(j)) / tv;
            cdf[static_cast<std::size_t>(j)] = acc;
          }
          for (int j = 0; j < n; ++j) {
            const double u = next_unit(state);
            const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
            const auto idx = static_cast<Eigen::Index>(it - cdf.begin());
            raw.push_back(m.sites.row(std::min<Eigen::Index>(idx, m.size() - 1))
                              .transpose());
          }
          return merge_sites(m.dim, raw, each);
        }
      },
      spec.spec);

  mu.generator = "splitmix64";
  mu.seed = seed;
  mu.spec_echo = "random n=" + std::to_string(n) + " mass=" + std::to_string(a) +
                 (mu.spec_echo.empty() ? "" : " of " + mu.spec_echo);
  return mu;
}

}  // namespace pointspec
