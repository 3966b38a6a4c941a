#include "pointspec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace pointspec {

namespace {

struct Cell {
  double epsilon;
  int n;
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class Fn>
void for_each_cell(int threads, std::size_t count, Fn&& fn) {
  threads = std::min<int>(resolve_threads(threads), static_cast<int>(count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void append_flag(std::string& flags, const std::string& f) {
  if (!flags.empty()) flags += ';';
  flags += f;
}

struct EntryView {
  double energy;
  int multiplicity;
};

// Entries of a SpectrumResult by ascending energy (descending alpha_star).
std::vector<EntryView> ascending_energy(const SpectrumResult& res) {
  std::vector<EntryView> out;
  out.reserve(res.eigenvalues.size());
  for (auto it = res.eigenvalues.rbegin(); it != res.eigenvalues.rend(); ++it)
    out.push_back({-it->alpha_star, it->multiplicity});
  return out;
}

std::vector<ConvergenceRow> solve_cell(const ExperimentPlan& plan,
                                       const Cell& cell,
                                       const CircleSpectrum* oracle) {
  const auto t0 = std::chrono::steady_clock::now();
  PointMeasure mu = plan.random_sampling
                        ? sample_random(plan.spec, cell.n, plan.random_mass,
                                        plan.seed)
                        : discretize(plan.spec, cell.n);
  const SchroedingerProblem problem{std::move(mu), cell.epsilon};
  const SpectrumResult res = find_spectrum(problem, plan.solver);
  const auto entries = ascending_energy(res);

  std::string cell_flags;
  if (res.truncated) append_flag(cell_flags, "truncated");
  if (res.near_threshold_unresolved > 0) append_flag(cell_flags, "near_threshold");

  // Order-preserving oracle match on multiplicity-expanded slots.
  std::vector<std::optional<double>> oracle_energy(entries.size());
  std::vector<std::optional<double>> abs_error(entries.size());
  if (oracle != nullptr) {
    std::vector<double> exact_slots;
    for (const auto& lv : oracle->levels)
      for (int m = 0; m < lv.multiplicity; ++m) exact_slots.push_back(lv.energy);
    std::vector<int> approx_slots;  // entry index per expanded slot
    for (std::size_t e = 0; e < entries.size(); ++e)
      for (int m = 0; m < entries[e].multiplicity; ++m)
        approx_slots.push_back(static_cast<int>(e));
    if (approx_slots.size() != exact_slots.size())
      append_flag(cell_flags, "count_mismatch");
    const std::size_t paired = std::min(approx_slots.size(), exact_slots.size());
    for (std::size_t s = 0; s < paired; ++s) {
      const int e = approx_slots[s];
      const double err = std::abs(entries[static_cast<std::size_t>(e)].energy -
                                  exact_slots[s]);
      if (!oracle_energy[static_cast<std::size_t>(e)])
        oracle_energy[static_cast<std::size_t>(e)] = exact_slots[s];
      auto& ae = abs_error[static_cast<std::size_t>(e)];
      ae = ae ? std::max(*ae, err) : err;
    }
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::vector<ConvergenceRow> rows;
  rows.reserve(entries.size());
  for (std::size_t e = 0; e < entries.size(); ++e) {
    ConvergenceRow row;
    row.epsilon = cell.epsilon;
    row.n = cell.n;
    row.level = static_cast<int>(e);
    row.energy = entries[e].energy;
    row.multiplicity = entries[e].multiplicity;
    row.oracle_energy = oracle_energy[e];
    row.abs_error = abs_error[e];
    row.wall_time = wall;
    row.flags = cell_flags;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ConvergenceRow> run_cells(const ExperimentPlan& plan,
                                      const CircleSpectrum* oracle) {
  if (plan.epsilon_list.empty() || plan.n_list.empty())
    throw std::domain_error("ExperimentPlan: epsilon_list and n_list nonempty");
  std::vector<Cell> cells;
  for (double eps : plan.epsilon_list)
    for (int n : plan.n_list) cells.push_back({eps, n});
  std::vector<std::vector<ConvergenceRow>> per_cell(cells.size());
  for_each_cell(plan.threads, cells.size(), [&](std::size_t i) {
    per_cell[i] = solve_cell(plan, cells[i], oracle);
  });
  std::vector<ConvergenceRow> rows;
  for (auto& r : per_cell)
    rows.insert(rows.end(), std::make_move_iterator(r.begin()),
                std::make_move_iterator(r.end()));
  std::sort(rows.begin(), rows.end(),
            [](const ConvergenceRow& a, const ConvergenceRow& b) {
              if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
              if (a.n != b.n) return a.n < b.n;
              return a.level < b.level;
            });
  return rows;
}

}  // namespace

std::vector<ConvergenceRow> run_convergence(const ExperimentPlan& plan) {
  const CircleMeasure* circle = std::get_if<CircleMeasure>(&plan.spec.spec);
  CircleSpectrum oracle;
  if (plan.with_oracle) {
    if (circle == nullptr)
      throw std::domain_error(
          "run_convergence: oracle comparison requires a circle spec");
    oracle = circle_spectrum({circle->radius, circle->gamma});
  }
  return run_cells(plan, plan.with_oracle ? &oracle : nullptr);
}

std::vector<ConvergenceRow> run_epsilon_sweep(const ExperimentPlan& plan) {
  std::vector<ConvergenceRow> rows = run_cells(plan, nullptr);
  if (!plan.with_oracle) return rows;

  // Analytic d=1 references: the eps -> 0 limits of the sweep.
  std::optional<double> reference;
  bool ground_only = false;
  if (const auto* pm = std::get_if<PointMeasure>(&plan.spec.spec);
      pm != nullptr && pm->dim == 1 && pm->size() == 1) {
    const double c = pm->couplings(0);
    if (c < 0.0) reference = -0.25 * c * c;  // single delta well
  } else if (const auto* iv = std::get_if<IntervalMeasure>(&plan.spec.spec);
             iv != nullptr && iv->const_density && *iv->const_density < 0.0) {
    reference =
        square_well_ground_energy(-*iv->const_density, iv->b - iv->a);
    ground_only = true;
  }
  if (!reference) return rows;
  for (auto& row : rows) {
    if (ground_only && row.level != 0) continue;
    row.oracle_energy = *reference;
    row.abs_error = std::abs(row.energy - *reference);
  }
  return rows;
}

CompareSummary compare_tables(const std::vector<ConvergenceRow>& run_a,
                              const std::vector<ConvergenceRow>& run_b) {
  if (run_a.size() != run_b.size())
    throw std::domain_error("compare_tables: row count mismatch");
  const auto median = [](std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
  };

  CompareSummary summary;
  summary.rows = run_a.size();
  std::vector<double> deltas;
  std::vector<double> err_a;
  std::vector<double> err_b;
  std::map<int, std::vector<double>> by_level;
  for (std::size_t i = 0; i < run_a.size(); ++i) {
    const auto& a = run_a[i];
    const auto& b = run_b[i];
    if (a.epsilon != b.epsilon || a.n != b.n || a.level != b.level)
      throw std::domain_error("compare_tables: key mismatch at row " +
                              std::to_string(i));
    const double d = std::abs(a.energy - b.energy);
    deltas.push_back(d);
    by_level[a.level].push_back(d);
    if (a.abs_error) err_a.push_back(*a.abs_error);
    if (b.abs_error) err_b.push_back(*b.abs_error);
  }
  summary.max_energy_delta =
      deltas.empty() ? 0.0 : *std::max_element(deltas.begin(), deltas.end());
  summary.median_energy_delta = median(deltas);
  if (!err_a.empty()) summary.median_abs_error_a = median(err_a);
  if (!err_b.empty()) summary.median_abs_error_b = median(err_b);
  for (auto& [level, v] : by_level) {
    LevelDelta ld;
    ld.level = level;
    ld.max_energy_delta = *std::max_element(v.begin(), v.end());
    ld.median_energy_delta = median(v);
    summary.per_level.push_back(ld);
  }
  return summary;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const std::vector<ConvergenceRow>& rows) {
  os << "epsilon,N,level,energy,multiplicity,oracle_energy,abs_error,flags\n";
  for (const auto& r : rows) {
    os << format_double(r.epsilon) << ',' << r.n << ',' << r.level << ','
       << format_double(r.energy) << ',' << r.multiplicity << ','
       << (r.oracle_energy ? format_double(*r.oracle_energy) : std::string())
       << ','
       << (r.abs_error ? format_double(*r.abs_error) : std::string()) << ','
       << r.flags << '\n';
  }
}

std::vector<ConvergenceRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) ||
      line != "epsilon,N,level,energy,multiplicity,oracle_energy,abs_error,flags")
    throw std::domain_error("read_csv: bad or missing header");
  std::vector<ConvergenceRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (int i = 0; i < 7; ++i) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos)
        throw std::domain_error("read_csv: missing field in row");
      fields.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    fields.push_back(line.substr(pos));
    ConvergenceRow r;
    r.epsilon = std::stod(fields[0]);
    r.n = std::stoi(fields[1]);
    r.level = std::stoi(fields[2]);
    r.energy = std::stod(fields[3]);
    r.multiplicity = std::stoi(fields[4]);
    if (!fields[5].empty()) r.oracle_energy = std::stod(fields[5]);
    if (!fields[6].empty()) r.abs_error = std::stod(fields[6]);
    r.flags = fields[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

double square_well_ground_energy(double depth, double width) {
  if (!(depth > 0.0) || !(width > 0.0))
    throw std::domain_error("square_well_ground_energy: depth, width > 0");
  const double h = 0.5 * width;
  const double sq = std::sqrt(depth);
  const double k_hi =
      std::min(0.5 * M_PI / h * (1.0 - 1e-12), sq * (1.0 - 1e-15));
  const auto g = [&](double k) {
    return k * std::tan(k * h) - std::sqrt(std::max(depth - k * k, 0.0));
  };
  double lo = 1e-12 * k_hi;
  double hi = k_hi;
  if (!(g(lo) < 0.0) || !(g(hi) > 0.0))
    throw std::runtime_error("square_well_ground_energy: bracket failure");
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  const double k = 0.5 * (lo + hi);
  return k * k - depth;
}

}  // namespace pointspec
