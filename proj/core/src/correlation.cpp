#include "spatrisk/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spatrisk/special_functions.hpp"

namespace spatrisk {

namespace {

void validate(const CorrelationModel& model) {
  if (!(model.theta > 0.0) || !std::isfinite(model.theta))
    throw std::domain_error("correlation: theta must be positive");
  if (model.family == CorrelationFamily::matern &&
      (!(model.kappa > 0.0) || !std::isfinite(model.kappa)))
    throw std::domain_error("correlation: matern kappa must be positive");
}

}  // namespace

double eval(const CorrelationModel& model, double h) {
  validate(model);
  if (!(h >= 0.0)) throw std::domain_error("correlation: distance must be >= 0");
  const double t = h / model.theta;
  switch (model.family) {
    case CorrelationFamily::exponential:
      return std::exp(-t);
    case CorrelationFamily::gaussian:
      return std::exp(-t * t);
    case CorrelationFamily::spherical:
      if (t >= 1.0) return 0.0;
      return 1.0 + t * (-1.5 + 0.5 * t * t);
    case CorrelationFamily::cubic: {
      if (t >= 1.0) return 0.0;
      const double t2 = t * t;
      return 1.0 + t2 * (-7.0 + t * (8.75 + t2 * (-3.5 + t2 * 0.75)));
    }
    case CorrelationFamily::matern: {
      // t^kappa K_kappa(t) / (Gamma(kappa) 2^(kappa-1)); the limit at the
      // origin is exactly 1.
      if (t < 1e-12) return 1.0;
      const double norm = std::tgamma(model.kappa) * std::pow(2.0, model.kappa - 1.0);
      const double kv = bessel_k(model.kappa, t);
      if (kv == 0.0) return 0.0;  // far tail underflowed
      const double r = std::pow(t, model.kappa) * kv / norm;
      return std::min(r, 1.0);
    }
  }
  throw std::domain_error("correlation: unknown family");
}

bool has_compact_support(CorrelationFamily family) {
  return family == CorrelationFamily::spherical || family == CorrelationFamily::cubic;
}

std::string_view to_string(CorrelationFamily family) {
  switch (family) {
    case CorrelationFamily::exponential: return "exponential";
    case CorrelationFamily::gaussian: return "gaussian";
    case CorrelationFamily::spherical: return "spherical";
    case CorrelationFamily::cubic: return "cubic";
    case CorrelationFamily::matern: return "matern";
  }
  return "?";
}

std::optional<CorrelationFamily> parse_family(std::string_view name) {
  for (CorrelationFamily f : kAllFamilies)
    if (name == to_string(f)) return f;
  return std::nullopt;
}

}  // namespace spatrisk
