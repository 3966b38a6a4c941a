#include "pointspec/json_io.hpp"

#include <stdexcept>

namespace pointspec {

nlohmann::json to_json(const PointMeasure& mu) {
  nlohmann::json sites = nlohmann::json::array();
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < mu.dim; ++k) row.push_back(mu.sites(j, k));
    sites.push_back(std::move(row));
  }
  nlohmann::json couplings = nlohmann::json::array();
  for (Eigen::Index j = 0; j < mu.size(); ++j)
    couplings.push_back(mu.couplings(j));
  return {{"dim", mu.dim},
          {"sites", std::move(sites)},
          {"couplings", std::move(couplings)},
          {"metadata",
           {{"generator", mu.generator},
            {"seed", mu.seed},
            {"spec", mu.spec_echo}}}};
}

PointMeasure point_measure_from_json(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  const auto& sites = j.at("sites");
  const auto& couplings = j.at("couplings");
  if (!sites.is_array() || !couplings.is_array() ||
      sites.size() != couplings.size())
    throw std::domain_error("point measure json: sites/couplings mismatch");
  const Eigen::Index n = static_cast<Eigen::Index>(sites.size());
  Eigen::MatrixXd s(n, dim);
  Eigen::VectorXd c(n);
  for (Eigen::Index row = 0; row < n; ++row) {
    const auto& site = sites[static_cast<std::size_t>(row)];
    if (!site.is_array() || static_cast<int>(site.size()) != dim)
      throw std::domain_error("point measure json: bad site row");
    for (int k = 0; k < dim; ++k)
      s(row, k) = site[static_cast<std::size_t>(k)].get<double>();
    c(row) = couplings[static_cast<std::size_t>(row)].get<double>();
  }
  PointMeasure mu = make_point_measure(dim, std::move(s), std::move(c));
  if (j.contains("metadata")) {
    const auto& meta = j.at("metadata");
    mu.generator = meta.value("generator", std::string());
    mu.seed = meta.value("seed", std::uint64_t{0});
    mu.spec_echo = meta.value("spec", std::string());
  }
  return mu;
}

nlohmann::json to_json(const SpectrumResult& result, bool include_basis) {
  nlohmann::json eigenvalues = nlohmann::json::array();
  for (const auto& entry : result.eigenvalues) {
    nlohmann::json e = {{"alpha_star", entry.alpha_star},
                        {"energy", -entry.alpha_star},
                        {"multiplicity", entry.multiplicity},
                        {"max_residual", entry.max_residual}};
    if (include_basis) {
      nlohmann::json basis = nlohmann::json::array();
      for (Eigen::Index c = 0; c < entry.kernel_basis.cols(); ++c) {
        nlohmann::json vec = nlohmann::json::array();
        for (Eigen::Index r = 0; r < entry.kernel_basis.rows(); ++r)
          vec.push_back(entry.kernel_basis(r, c));
        basis.push_back(std::move(vec));
      }
      e["kernel_basis"] = std::move(basis);
    }
    eigenvalues.push_back(std::move(e));
  }
  return {{"eigenvalues", std::move(eigenvalues)},
          {"truncated", result.truncated},
          {"search_window",
           {{"alpha_min", result.alpha_min_used},
            {"alpha_max", result.alpha_max_used}}},
          {"near_threshold_unresolved", result.near_threshold_unresolved},
          {"options",
           {{"grid_per_decade", result.options_used.grid_per_decade},
            {"tol_root", result.options_used.tol_root},
            {"tol_cluster", result.options_used.tol_cluster},
            {"alpha_min", result.options_used.alpha_min},
            {"tol_residual", result.options_used.tol_residual}}}};
}

}  // namespace pointspec
