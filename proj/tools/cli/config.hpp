#pragma once

#include <deforce/analysis.hpp>
#include <deforce/engine.hpp>
#include <deforce/kernels.hpp>
#include <deforce/profiles.hpp>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace deforce::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Invalid or inconsistent configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads one JSON object, remembering which keys were consumed so that
/// leftovers can be rejected. Every value read (including defaults) is
/// echoed into resolved().
class Section {
 public:
  Section(const json& node, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  std::optional<double> optional_number(const std::string& key);
  int integer(const std::string& key, int fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& fallback);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
  std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& fallback);
  Section child(const std::string& key);
  /// Marks key as read and echoes its value unchanged.
  const json& raw(const std::string& key);
  /// Stores a nested section's resolved form.
  void put(const std::string& key, json value);

  /// Throws ConfigError naming the first key that was never read.
  void finish() const;

  const json& resolved() const { return resolved_; }
  const std::string& path() const { return path_; }

 private:
  const json& at(const std::string& key);
  std::string where(const std::string& key) const;

  const json& node_;
  std::string path_;
  std::vector<std::string> used_;
  json resolved_ = json::object();
};

Domain parse_domain(Section& s);
SurfaceProfile parse_profile(Section& s);
InteractionKernel parse_kernel(Section& s, const QuadratureSpec& spec);
QuadratureSpec parse_quad(Section& s);
GammaFitOptions parse_gamma(Section& s);
JacobianOptions parse_jacobian(Section& s);

/// Overrides given on the command line; applied before validation and
/// echoed in the resolved config.
struct Overrides {
  std::optional<double> quad_tol;
  std::optional<double> rho_m_frac;
};

/// Accepts either a run config or a manifest written by a previous run
/// (whose "config" member is used). Applies overrides, checks the schema
/// version and returns the document to parse.
json load_config(const std::string& path);
json normalize_config(json doc, const Overrides& ov);

}  // namespace deforce::cli
