#include "spatrisk/damage_covariance.hpp"

#include <cmath>
#include <stdexcept>

#include "spatrisk/special_functions.hpp"

namespace spatrisk {

double r0_standard(double u) {
  return norm_pdf(u) - u * norm_sf(u);
}

double excess_variance(double u) {
  const double m = r0_standard(u);
  return (1.0 + u * u) * norm_sf(u) - u * norm_pdf(u) - m * m;
}

double damage_cov_rho(double rho, double u) {
  if (!(rho > -1.0 && rho <= 1.0))
    throw std::domain_error("damage_cov: correlation outside (-1,1]");
  if (rho == 0.0) return 0.0;
  if (1.0 - rho < 1e-12) return excess_variance(u);
  const double m = r0_standard(u);
  // sqrt((1-rho)/(1+rho)) is the stable form of (1-rho)/sqrt(1-rho^2).
  const double ratio = std::sqrt((1.0 - rho) / (1.0 + rho));
  const double pdf_half = norm_pdf(u / std::sqrt(1.0 + rho));
  return (rho + u * u) * bvn_upper(u, u, rho)
         - 2.0 * u * norm_pdf(u) * norm_sf(u * ratio)
         + std::sqrt((1.0 - rho) * (1.0 + rho)) * pdf_half * pdf_half
         - m * m;
}

double damage_cov(double h, double u, const CorrelationModel& model) {
  if (!(h >= 0.0)) throw std::domain_error("damage_cov: distance must be >= 0");
  return damage_cov_rho(eval(model, h), u);
}

}  // namespace spatrisk
