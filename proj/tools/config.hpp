#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "spatrisk/correlation.hpp"
#include "spatrisk/geometry.hpp"
#include "spatrisk/quadrature.hpp"
#include "spatrisk/risk_engine.hpp"
#include "spatrisk/simulation.hpp"

namespace spatrisk::cli {

/// Malformed or inconsistent configuration; diagnostics always name the
/// offending key (or line for syntax errors). Mapped to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using json = nlohmann::json;

/// Parses a config file, turning syntax errors into line/column
/// diagnostics.
json load_config_file(const std::string& path);

/// Fetches the command's top-level record ("risk", "curve", "mc").
const json& command_record(const json& root, const std::string& command);

// Typed field access; every failure names the full key path.
const json& require_key(const json& obj, const std::string& path, const char* key);
double require_number(const json& obj, const std::string& path, const char* key);
double number_or(const json& obj, const std::string& path, const char* key,
                 double fallback);
std::string require_string(const json& obj, const std::string& path, const char* key);
std::uint64_t uint_or(const json& obj, const std::string& path, const char* key,
                      std::uint64_t fallback);

Region parse_region(const json& obj, const std::string& path);
CorrelationModel parse_correlation(const json& obj, const std::string& path);
Marginal parse_marginal(const json& obj, const std::string& path);

/// Threshold spec: exactly one of {"u": raw-unit threshold,
/// "p": marginal quantile level in (0,1)}.
struct Threshold {
  bool is_probability = false;
  double value = 0.0;
  /// Raw-unit threshold for the given marginal.
  double raw(const Marginal& marginal) const;
};
Threshold parse_threshold(const json& obj, const std::string& path);

QuadratureConfig parse_quadrature(const json& parent, const std::string& path);
GridMode parse_grid_mode(const std::string& name, const std::string& path);

}  // namespace spatrisk::cli
