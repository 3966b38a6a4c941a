#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pointspec/errors.hpp"
#include "pointspec/green.hpp"
#include "pointspec/harness.hpp"
#include "pointspec/json_io.hpp"
#include "pointspec/measure.hpp"
#include "pointspec/oracle.hpp"
#include "pointspec/spectral.hpp"
#include "pointspec/version.hpp"

namespace {

using nlohmann::json;
using namespace pointspec;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTruncated = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- strict config parsing ------------------------------------------------

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
  }
}

double require_number(const json& obj, const std::string& key,
                      const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_number())
    throw ConfigError("missing or non-numeric \"" + key + "\" in " + where);
  return obj.at(key).get<double>();
}

int require_int(const json& obj, const std::string& key,
                const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_number_integer())
    throw ConfigError("missing or non-integer \"" + key + "\" in " + where);
  return obj.at(key).get<int>();
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  return j;
}

struct ParsedMeasure {
  MeasureSpec spec;
  int n = 0;            // discretization size (0 for explicit measures)
  bool random = false;  // i.i.d. sampling requested
  double mass = 0.0;
  std::uint64_t seed = 0;
};

MeasureSpec parse_base_spec(const json& m, const std::string& where) {
  const std::string type = m.value("type", std::string());
  if (type == "circle") {
    reject_unknown_keys(m, {"type", "radius", "gamma", "n"}, where);
    return MeasureSpec{CircleMeasure{require_number(m, "radius", where),
                                     require_number(m, "gamma", where)}};
  }
  if (type == "uniform_interval") {
    reject_unknown_keys(m, {"type", "a", "b", "density", "n"}, where);
    return uniform_interval_measure(require_number(m, "a", where),
                                    require_number(m, "b", where),
                                    require_number(m, "density", where));
  }
  if (type == "explicit") {
    reject_unknown_keys(m, {"type", "dim", "sites", "couplings"}, where);
    json pm = m;
    pm.erase("type");
    return MeasureSpec{point_measure_from_json(pm)};
  }
  throw ConfigError("unknown measure type \"" + type + "\" in " + where);
}

ParsedMeasure parse_measure(const json& m, const std::string& where) {
  if (!m.is_object()) throw ConfigError(where + " must be an object");
  ParsedMeasure out;
  const std::string type = m.value("type", std::string());
  if (type == "random") {
    reject_unknown_keys(m, {"type", "base", "n", "mass", "seed"}, where);
    if (!m.contains("base")) throw ConfigError("random measure needs \"base\"");
    out.spec = parse_base_spec(m.at("base"), where + ".base");
    out.n = m.contains("n") ? require_int(m, "n", where) : 0;
    out.mass = require_number(m, "mass", where);
    out.seed = m.value("seed", std::uint64_t{0});
    out.random = true;
    return out;
  }
  out.spec = parse_base_spec(m, where);
  if (type != "explicit") out.n = m.contains("n") ? require_int(m, "n", where) : 0;
  return out;
}

SolveOptions parse_solver(const json& cfg) {
  SolveOptions opts;
  if (!cfg.contains("solver")) return opts;
  const json& s = cfg.at("solver");
  reject_unknown_keys(
      s, {"grid_per_decade", "tol_root", "tol_cluster", "alpha_min", "tol_residual"},
      "solver");
  opts.grid_per_decade = s.value("grid_per_decade", opts.grid_per_decade);
  opts.tol_root = s.value("tol_root", opts.tol_root);
  opts.tol_cluster = s.value("tol_cluster", opts.tol_cluster);
  opts.alpha_min = s.value("alpha_min", opts.alpha_min);
  opts.tol_residual = s.value("tol_residual", opts.tol_residual);
  return opts;
}

json rng_metadata(const PointMeasure& mu) {
  return {{"generator", mu.generator.empty() ? "deterministic" : mu.generator},
          {"seed", mu.seed}};
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

// Tabular outputs stay pure tables; tool/config/RNG metadata goes to a
// sidecar next to the file.
void write_table_with_meta(const std::string& path, const std::string& table,
                           const json& config, const json& rng) {
  write_text_file(path, table);
  const json meta = {
      {"tool", "pointspec"}, {"version", kVersion}, {"config", config},
      {"rng", rng}};
  write_text_file(path + ".meta.json", meta.dump(2) + "\n");
}

json deterministic_rng() {
  return {{"generator", "deterministic"}, {"seed", 0}};
}

// ---- subcommand payloads ---------------------------------------------------

int run_green(int dim, double epsilon, double alpha,
              const std::vector<double>& r_list, const std::string& out_path) {
  if (r_list.empty()) throw ConfigError("green: r list must not be empty");
  const KernelParams params{dim, epsilon, alpha};
  std::ostringstream os;
  os << "r,g_eps,g_free\n";
  for (double r : r_list) {
    const double g = green_eval(params, r);
    std::string free_col = "inf";
    if (!(dim >= 2 && r == 0.0))
      free_col = format_double(free_green(dim, alpha, r));
    os << format_double(r) << ',' << format_double(g) << ',' << free_col << '\n';
  }
  if (out_path.empty())
    std::cout << os.str();
  else
    write_table_with_meta(out_path, os.str(),
                          {{"dim", dim},
                           {"epsilon", epsilon},
                           {"alpha", alpha},
                           {"r", r_list}},
                          deterministic_rng());
  return kExitOk;
}

int run_solve(const std::string& config_path, const std::string& out_path,
              std::uint64_t seed_override, bool has_seed_override) {
  const json cfg = load_json_file(config_path);
  reject_unknown_keys(cfg, {"measure", "epsilon", "solver", "kernel_basis"},
                      "config");
  if (!cfg.contains("measure")) throw ConfigError("config needs \"measure\"");
  ParsedMeasure pm = parse_measure(cfg.at("measure"), "measure");
  if (has_seed_override) pm.seed = seed_override;
  const double epsilon = require_number(cfg, "epsilon", "config");
  const SolveOptions opts = parse_solver(cfg);
  const bool with_basis = cfg.value("kernel_basis", true);

  const bool is_explicit = std::holds_alternative<PointMeasure>(pm.spec.spec);
  if (!is_explicit && pm.n < 1)
    throw ConfigError("measure needs \"n\" >= 1 for discretization");
  PointMeasure mu = pm.random ? sample_random(pm.spec, pm.n, pm.mass, pm.seed)
                              : discretize(pm.spec, std::max(pm.n, 1));
  const SchroedingerProblem problem{mu, epsilon};
  const SpectrumResult result = find_spectrum(problem, opts);

  json out = {{"tool", "pointspec"},
              {"version", kVersion},
              {"config", cfg},
              {"rng", rng_metadata(mu)},
              {"measure", to_json(mu)},
              {"result", to_json(result, with_basis)}};
  const std::string text = out.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
  return result.truncated ? kExitTruncated : kExitOk;
}

int run_oracle(double radius, double gamma, const std::string& format,
               const std::string& out_path) {
  const CircleSpectrum spectrum = circle_spectrum({radius, gamma});
  std::ostringstream os;
  if (format == "csv") {
    os << "l,kappa,energy,multiplicity\n";
    for (const auto& lv : spectrum.levels)
      os << lv.l << ',' << format_double(lv.kappa) << ','
         << format_double(lv.energy) << ',' << lv.multiplicity << '\n';
  } else if (format == "json") {
    json levels = json::array();
    for (const auto& lv : spectrum.levels)
      levels.push_back({{"l", lv.l},
                        {"kappa", lv.kappa},
                        {"energy", lv.energy},
                        {"multiplicity", lv.multiplicity}});
    const json out = {{"tool", "pointspec"},
                      {"version", kVersion},
                      {"config", {{"radius", radius}, {"gamma", gamma}}},
                      {"levels", std::move(levels)}};
    os << out.dump(2) << "\n";
  } else {
    throw ConfigError("oracle: format must be csv or json");
  }
  if (out_path.empty())
    std::cout << os.str();
  else if (format == "csv")
    write_table_with_meta(out_path, os.str(),
                          {{"radius", radius}, {"gamma", gamma}},
                          deterministic_rng());
  else
    write_text_file(out_path, os.str());
  return kExitOk;
}

int run_converge(const std::string& config_path, const std::string& out_path,
                 int threads, std::uint64_t seed_override,
                 bool has_seed_override) {
  const json cfg = load_json_file(config_path);
  reject_unknown_keys(cfg,
                      {"measure", "epsilon_list", "n_list", "solver", "oracle",
                       "mode", "seed", "threads", "random", "mass"},
                      "config");
  if (!cfg.contains("measure")) throw ConfigError("config needs \"measure\"");
  ExperimentPlan plan;
  ParsedMeasure pm = parse_measure(cfg.at("measure"), "measure");
  plan.spec = pm.spec;
  plan.random_sampling = pm.random || cfg.value("random", false);
  plan.random_mass = pm.random ? pm.mass : cfg.value("mass", -1.0);
  plan.seed = pm.random ? pm.seed : cfg.value("seed", std::uint64_t{0});
  if (has_seed_override) plan.seed = seed_override;
  if (!cfg.contains("epsilon_list") || !cfg.at("epsilon_list").is_array())
    throw ConfigError("config needs numeric array \"epsilon_list\"");
  for (const auto& e : cfg.at("epsilon_list"))
    plan.epsilon_list.push_back(e.get<double>());
  if (!cfg.contains("n_list") || !cfg.at("n_list").is_array())
    throw ConfigError("config needs integer array \"n_list\"");
  for (const auto& n : cfg.at("n_list")) plan.n_list.push_back(n.get<int>());
  plan.solver = parse_solver(cfg);
  plan.with_oracle = cfg.value("oracle", false);
  plan.threads = threads > 0 ? threads : cfg.value("threads", 0);
  const std::string mode = cfg.value("mode", std::string("n_sweep"));
  if (mode == "n_sweep")
    plan.mode = SweepMode::kNSweep;
  else if (mode == "epsilon_sweep")
    plan.mode = SweepMode::kEpsilonSweep;
  else
    throw ConfigError("mode must be n_sweep or epsilon_sweep");

  const auto rows = (plan.mode == SweepMode::kNSweep) ? run_convergence(plan)
                                                      : run_epsilon_sweep(plan);
  std::ostringstream os;
  write_csv(os, rows);
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    write_table_with_meta(
        out_path, os.str(), cfg,
        {{"generator", plan.random_sampling ? "splitmix64" : "deterministic"},
         {"seed", plan.seed}});
  }
  return kExitOk;
}

int run_compare(const std::string& path_a, const std::string& path_b,
                const std::string& out_path) {
  std::ifstream fa(path_a);
  if (!fa) throw ConfigError("cannot open " + path_a);
  std::ifstream fb(path_b);
  if (!fb) throw ConfigError("cannot open " + path_b);
  const auto rows_a = read_csv(fa);
  const auto rows_b = read_csv(fb);
  const CompareSummary s = compare_tables(rows_a, rows_b);
  json per_level = json::array();
  for (const auto& ld : s.per_level)
    per_level.push_back({{"level", ld.level},
                         {"max_energy_delta", ld.max_energy_delta},
                         {"median_energy_delta", ld.median_energy_delta}});
  json out = {{"tool", "pointspec"},
              {"version", kVersion},
              {"config", {{"a", path_a}, {"b", path_b}}},
              {"rows", s.rows},
              {"max_energy_delta", s.max_energy_delta},
              {"median_energy_delta", s.median_energy_delta},
              {"per_level", std::move(per_level)}};
  if (s.median_abs_error_a) out["median_abs_error_a"] = *s.median_abs_error_a;
  if (s.median_abs_error_b) out["median_abs_error_b"] = *s.median_abs_error_b;
  const std::string text = out.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Negative spectra of -Laplacian + eps^2 Laplacian^2 + mu for "
               "finite point measures"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string("pointspec ") + kVersion);

  std::string config_path;
  std::string out_path;
  int threads = 0;
  std::uint64_t seed = 0;
  bool has_seed = false;
  app.add_option("--config", config_path, "JSON config file")->configurable(false);
  app.add_option("--out", out_path, "output path (default: stdout)");
  app.add_option("--threads", threads, "worker threads, 0 = auto");
  app.add_option("--seed", seed, "RNG seed override")
      ->each([&](const std::string&) { has_seed = true; });

  auto* green = app.add_subcommand("green", "evaluate the kernel on a radius list");
  int dim = 1;
  double epsilon = 1e-3;
  double alpha = 1.0;
  std::vector<double> r_list;
  green->add_option("--dim", dim, "dimension 1..3")->required();
  green->add_option("--epsilon", epsilon, "regularization eps > 0")->required();
  green->add_option("--alpha", alpha, "spectral shift alpha > 0")->required();
  green->add_option("--r", r_list, "radii to evaluate");

  auto* solve = app.add_subcommand("solve", "negative spectrum of one problem");
  auto* oracle = app.add_subcommand("oracle", "exact circle spectrum");
  double radius = 10.0;
  double gamma = 1.0;
  std::string format = "json";
  oracle->add_option("--radius", radius, "circle radius")->required();
  oracle->add_option("--gamma", gamma, "coupling density")->required();
  oracle->add_option("--format", format, "csv or json");

  auto* converge = app.add_subcommand("converge", "convergence experiment -> CSV");
  auto* compare = app.add_subcommand("compare", "delta summary of two runs");
  std::string path_a;
  std::string path_b;
  compare->add_option("--a", path_a, "first CSV")->required();
  compare->add_option("--b", path_b, "second CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (green->parsed()) return run_green(dim, epsilon, alpha, r_list, out_path);
    if (solve->parsed()) {
      if (config_path.empty()) throw ConfigError("solve requires --config");
      return run_solve(config_path, out_path, seed, has_seed);
    }
    if (oracle->parsed()) return run_oracle(radius, gamma, format, out_path);
    if (converge->parsed()) {
      if (config_path.empty()) throw ConfigError("converge requires --config");
      return run_converge(config_path, out_path, threads, seed, has_seed);
    }
    if (compare->parsed()) return run_compare(path_a, path_b, out_path);
    throw ConfigError("no subcommand");
  } catch (const DecompositionDomainError& e) {
    std::cerr << "error: " << e.what()
              << " (the decomposition requires 4*eps^2*alpha < 1)\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}
