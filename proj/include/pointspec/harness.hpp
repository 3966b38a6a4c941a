#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pointspec/measure.hpp"
#include "pointspec/oracle.hpp"
#include "pointspec/spectral.hpp"

namespace pointspec {

enum class SweepMode { kNSweep, kEpsilonSweep };

struct ExperimentPlan {
  MeasureSpec spec;
  std::vector<double> epsilon_list;  // ascending
  std::vector<int> n_list;           // ascending
  SolveOptions solver;
  bool with_oracle = false;
  SweepMode mode = SweepMode::kNSweep;
  std::uint64_t seed = 0;       // used when sampling == kRandom
  bool random_sampling = false; // i.i.d. sampling instead of midpoint panels
  double random_mass = -1.0;    // total mass a for random sampling
  int threads = 0;              // 0 = hardware concurrency
};

struct ConvergenceRow {
  double epsilon;
  int n;
  int level;  // index among eigenvalue entries, ascending energy
  double energy;
  int multiplicity;
  std::optional<double> oracle_energy;
  std::optional<double> abs_error;
  double wall_time = 0.0;  // seconds, informational; never serialized
  std::string flags;       // semicolon-joined: truncated, count_mismatch, ...
};

/// One solve per (epsilon, N) cell: discretize, find the spectrum and match
/// it against the exact circle levels when the oracle is enabled. Rows come
/// back canonically sorted by (epsilon, N, level).
std::vector<ConvergenceRow> run_convergence(const ExperimentPlan& plan);

/// Fixes the measure shape and sweeps epsilon downward; attaches the
/// analytic references for the d=1 single-delta and uniform-interval specs.
std::vector<ConvergenceRow> run_epsilon_sweep(const ExperimentPlan& plan);

struct LevelDelta {
  int level;
  double max_energy_delta;
  double median_energy_delta;
};

struct CompareSummary {
  std::size_t rows = 0;
  double max_energy_delta = 0.0;
  double median_energy_delta = 0.0;
  std::optional<double> median_abs_error_a;
  std::optional<double> median_abs_error_b;
  std::vector<LevelDelta> per_level;
};

/// Row-by-row comparison of two runs with identical (epsilon, N, level)
/// keys; throws std::domain_error on shape mismatch.
CompareSummary compare_tables(const std::vector<ConvergenceRow>& run_a,
                              const std::vector<ConvergenceRow>& run_b);

/// CSV with exactly the columns
/// epsilon,N,level,energy,multiplicity,oracle_energy,abs_error,flags and one
/// header row; absent optionals are empty fields. Byte-deterministic.
void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows);
std::vector<ConvergenceRow> read_csv(std::istream& is);

/// Ground energy of the depth-V0, width-w square well in d=1 from the
/// transcendental matching relation (used as the epsilon-sweep reference).
double square_well_ground_energy(double depth, double width);

/// Shortest round-trip decimal form of a double; the CSV number format.
std::string format_double(double v);

}  // namespace pointspec
