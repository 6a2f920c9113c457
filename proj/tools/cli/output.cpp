#include "output.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>
#include <stdexcept>
#include <unistd.h>

namespace deforce::cli {
namespace {

json optional(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// JSON has no infinity; unbounded values are written as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const QuadratureSpec& spec) {
  return {{"rel_tol", spec.rel_tol},
          {"abs_tol", spec.abs_tol},
          {"max_subdiv", spec.max_subdivisions},
          {"axisymmetric_reduction", spec.axisymmetric_reduction}};
}

json to_json(const FunctionalResult& r) {
  return {{"F0", r.F0},
          {"F0_error", r.F0_error},
          {"F2", optional(r.F2)},
          {"F2_error", r.F2_error},
          {"F4_partial", optional(r.F4)},
          {"F4_error", r.F4_error},
          {"total", r.total()},
          {"total_error", r.total_error()},
          {"kernel", r.kernel},
          {"profile", r.profile},
          {"planform", r.planform},
          {"rho_max", finite_or_null(r.rho_max)},
          {"quad", to_json(r.spec)}};
}

json to_json(const FitReport& r) {
  json terms = json::array();
  for (std::size_t i = 0; i < r.terms.size(); ++i)
    terms.push_back({{"term", r.terms[i].name()}, {"coefficient", r.coefficients(static_cast<Eigen::Index>(i))}});
  json cov = json::array();
  for (Eigen::Index i = 0; i < r.covariance.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < r.covariance.cols(); ++j) row.push_back(r.covariance(i, j));
    cov.push_back(row);
  }
  json ladder = json::array();
  for (const LadderPoint& p : r.ladder)
    ladder.push_back({{"a_over_R", p.x},
                      {"energy", p.energy},
                      {"error", p.error},
                      {"lead", p.lead},
                      {"ratio", p.ratio},
                      {"ratio_error", p.ratio_error}});
  return {{"model", to_string(r.model)},
          {"family", to_string(r.family)},
          {"kernel", r.kernel},
          {"R", r.R},
          {"base_dim", r.base_dim},
          {"gamma", r.gamma},
          {"gamma_log", optional(r.gamma_log)},
          {"sigma_stat", r.sigma_stat},
          {"rung_drift", r.rung_drift},
          {"uncertainty", r.uncertainty},
          {"sigma_stat_log", optional(r.sigma_stat_log)},
          {"rung_drift_log", optional(r.rung_drift_log)},
          {"uncertainty_log", optional(r.uncertainty_log)},
          {"terms", terms},
          {"covariance", cov},
          {"residual_max", r.residual_max},
          {"fit_tolerance", r.fit_tolerance},
          {"ladder", ladder},
          {"rho_m_frac", r.rho_m_frac},
          {"rho_m_frac_alt", r.rho_m_frac_alt},
          {"gamma_alt", r.gamma_alt},
          {"gamma_log_alt", optional(r.gamma_log_alt)},
          {"rho_m_drift", r.rho_m_drift},
          {"rho_m_drift_log", optional(r.rho_m_drift_log)},
          {"reference", optional(r.reference)},
          {"deviation", optional(r.deviation)},
          {"leading_ratio", r.leading_ratio}};
}

json to_json(const MethodTable& t) {
  json rows = json::array();
  for (const MethodRow& r : t.rows)
    rows.push_back({{"method", r.method},
                    {"energy", optional(r.energy)},
                    {"energy_error", r.energy_error},
                    {"force", optional(r.force)},
                    {"energy_ratio_to_DE2", optional(r.energy_ratio)},
                    {"force_ratio_to_DA", optional(r.force_ratio)},
                    {"note", r.note}});
  return {{"kernel", t.kernel}, {"profile", t.profile}, {"rows", rows}};
}

json to_json(const JacobianProfile& j) {
  json bins = json::array();
  for (std::size_t k = 0; k < j.values.size(); ++k)
    bins.push_back({{"h_lo", j.edges[k]}, {"h_hi", j.edges[k + 1]}, {"h", j.centers[k]}, {"J", j.values[k]}});
  return {{"d", j.d},
          {"degenerate", j.degenerate},
          {"exact_level_sets", j.exact_level_sets},
          {"total_area", j.total_area},
          {"window", {j.window_lo, j.window_hi}},
          {"J0", j.J0},
          {"J1", j.J1},
          {"bins", bins}};
}

json to_json(const ScalingReport& r) {
  json entries = json::array();
  for (const ScalingEntry& e : r.entries)
    entries.push_back({{"order", e.order},
                       {"lambda", e.lambda},
                       {"expected", e.expected},
                       {"measured", finite_or_null(e.measured)},
                       {"violation", finite_or_null(e.violation)}});
  return {{"profile", r.profile},
          {"kernel", r.kernel},
          {"entries", entries},
          {"max_violation", finite_or_null(r.max_violation)},
          {"tolerance", r.tolerance},
          {"passed", r.passed},
          {"worst", r.worst}};
}

json to_json(const AdditivityReport& r) {
  json entries = json::array();
  for (const AdditivityEntry& e : r.entries)
    entries.push_back({{"profile", e.profile},
                       {"em", e.em},
                       {"dirichlet_plus_neumann", e.sum},
                       {"relative", e.relative},
                       {"combined_error", e.combined_error},
                       {"passed", e.passed}});
  return {{"entries", entries},
          {"max_relative", r.max_relative},
          {"tolerance", r.tolerance},
          {"passed", r.passed}};
}

std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  return os.str();
}

std::string CsvTable::str() const {
  std::ostringstream os;
  os << "# units: " << units << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace deforce::cli
