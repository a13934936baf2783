#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "spatrisk/special_functions.hpp"

namespace spatrisk::cli {

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Convert the byte offset into a line/column diagnostic.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < e.byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << path << ": parse error at line " << line << ", column " << col << ": "
       << e.what();
    throw ConfigError(os.str());
  }
}

const json& command_record(const json& root, const std::string& command) {
  if (!root.is_object())
    throw ConfigError("config root: expected an object with a '" + command +
                      "' record");
  auto it = root.find(command);
  if (it == root.end())
    throw ConfigError("config root: missing the '" + command + "' record");
  if (!it->is_object())
    throw ConfigError(command + ": expected an object");
  return *it;
}

const json& require_key(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key + ": missing");
  return *it;
}

double require_number(const json& obj, const std::string& path, const char* key) {
  const json& v = require_key(obj, path, key);
  if (!v.is_number())
    throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key,
                 double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number())
    throw ConfigError(path + "." + key + ": expected a number");
  return it->get<double>();
}

std::string require_string(const json& obj, const std::string& path, const char* key) {
  const json& v = require_key(obj, path, key);
  if (!v.is_string())
    throw ConfigError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::uint64_t uint_or(const json& obj, const std::string& path, const char* key,
                      std::uint64_t fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_unsigned())
    throw ConfigError(path + "." + key + ": expected a non-negative integer");
  return it->get<std::uint64_t>();
}

Region parse_region(const json& obj, const std::string& path) {
  const std::string shape = require_string(obj, path, "shape");
  const auto parsed = parse_shape(shape);
  if (!parsed)
    throw ConfigError(path + ".shape: unsupported shape '" + shape +
                      "' (expected 'disk' or 'square')");
  Region region;
  region.shape = *parsed;
  region.size = require_number(obj, path, "size");
  region.lambda = number_or(obj, path, "lambda", 1.0);
  if (!(region.size > 0.0))
    throw ConfigError(path + ".size: must be positive");
  if (!(region.lambda > 0.0))
    throw ConfigError(path + ".lambda: must be positive");
  return region;
}

CorrelationModel parse_correlation(const json& obj, const std::string& path) {
  const std::string family = require_string(obj, path, "family");
  const auto parsed = parse_family(family);
  if (!parsed)
    throw ConfigError(path + ".family: unknown correlation family '" + family + "'");
  CorrelationModel model;
  model.family = *parsed;
  model.theta = require_number(obj, path, "theta");
  model.kappa = number_or(obj, path, "kappa", 1.0);
  if (!(model.theta > 0.0)) throw ConfigError(path + ".theta: must be positive");
  if (model.family == CorrelationFamily::matern && !(model.kappa > 0.0))
    throw ConfigError(path + ".kappa: must be positive");
  return model;
}

Marginal parse_marginal(const json& obj, const std::string& path) {
  Marginal marginal;
  marginal.mu = number_or(obj, path, "mu", 0.0);
  marginal.sigma2 = number_or(obj, path, "sigma2", 1.0);
  if (!(marginal.sigma2 > 0.0))
    throw ConfigError(path + ".sigma2: must be positive");
  return marginal;
}

double Threshold::raw(const Marginal& marginal) const {
  if (!is_probability) return value;
  return marginal.mu + std::sqrt(marginal.sigma2) * norm_quantile(value);
}

Threshold parse_threshold(const json& obj, const std::string& path) {
  const bool has_u = obj.contains("u");
  const bool has_p = obj.contains("p");
  if (has_u == has_p)
    throw ConfigError(path + ": give exactly one of 'u' (raw threshold) or "
                             "'p' (quantile level)");
  Threshold t;
  if (has_p) {
    t.is_probability = true;
    t.value = require_number(obj, path, "p");
    if (!(t.value > 0.0 && t.value < 1.0))
      throw ConfigError(path + ".p: must lie in (0,1)");
  } else {
    t.value = require_number(obj, path, "u");
    if (!std::isfinite(t.value)) throw ConfigError(path + ".u: must be finite");
  }
  return t;
}

QuadratureConfig parse_quadrature(const json& parent, const std::string& path) {
  QuadratureConfig quad;
  auto it = parent.find("quadrature");
  if (it == parent.end()) return quad;
  if (!it->is_object()) throw ConfigError(path + ".quadrature: expected an object");
  quad.abs_tol = number_or(*it, path + ".quadrature", "tolerance", quad.abs_tol);
  if (!(quad.abs_tol > 0.0))
    throw ConfigError(path + ".quadrature.tolerance: must be positive");
  return quad;
}

GridMode parse_grid_mode(const std::string& name, const std::string& path) {
  if (name == "regular") return GridMode::regular;
  if (name == "stratified-jittered") return GridMode::stratified_jittered;
  throw ConfigError(path + ": unknown grid mode '" + name +
                    "' (expected 'regular' or 'stratified-jittered')");
}

}  // namespace spatrisk::cli
