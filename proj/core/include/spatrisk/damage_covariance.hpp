#pragma once

#include "spatrisk/correlation.hpp"

namespace spatrisk {

/// Expected excess E[(Z - u)^+] of a standard normal over the threshold u:
/// pdf(u) - u * sf(u). Strictly positive and strictly decreasing in u.
double r0_standard(double u);

/// Variance of the excess (Z - u)^+: the rho -> 1 limit of the damage
/// covariance.
double excess_variance(double u);

/// Damage covariance of a standard pair with correlation rho in (-1, 1]:
/// Cov((X - u)^+, (Y - u)^+). Exactly 0 at rho = 0; branches to
/// excess_variance within 1e-12 of rho = 1.
double damage_cov_rho(double rho, double u);

/// G(h, u): damage covariance at distance h under the given correlation
/// model.
double damage_cov(double h, double u, const CorrelationModel& model);

}  // namespace spatrisk
