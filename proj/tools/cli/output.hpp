#pragma once

#include <deforce/analysis.hpp>
#include <deforce/engine.hpp>
#include <json.hpp>
#include <string>
#include <vector>

namespace deforce::cli {

using nlohmann::json;

json to_json(const QuadratureSpec& spec);
json to_json(const FunctionalResult& r);
json to_json(const FitReport& r);
json to_json(const MethodTable& t);
json to_json(const JacobianProfile& j);
json to_json(const ScalingReport& r);
json to_json(const AdditivityReport& r);

/// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_number(double v);

/// Comma-separated table with a "# units: ..." comment line above the
/// header row.
struct CsvTable {
  std::string units;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string str() const;
};

/// Writes to a temporary file in the target directory and renames it into
/// place.
void write_atomic(const std::string& path, const std::string& content);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const json& j);

}  // namespace deforce::cli
