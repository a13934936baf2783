#pragma once

namespace spatrisk {

// Univariate standard normal.

/// Density of the standard normal distribution.
double norm_pdf(double x);

/// Cumulative distribution function of the standard normal.
double norm_cdf(double x);

/// Survival function 1 - Phi(x). Evaluated through erfc so the upper tail
/// keeps full absolute accuracy instead of cancelling against 1.
double norm_sf(double x);

/// Quantile (inverse cdf), p in (0,1). Wichura's PPND16 rational
/// approximations, good to ~1e-15 relative.
double norm_quantile(double p);

// Bivariate standard normal with correlation w.

/// Upper-orthant probability P(X1 > u, X2 > v) for a standard bivariate
/// normal pair with correlation w in (-1,1). w = +1 and w = -1 are handled
/// as the comonotone/antimonotone limits; |w| > 1 is a domain error.
///
/// Computed with Gauss-Legendre panels on the Drezner-Wesolowsky arcsine
/// correlation path; for |w| > 0.925 the path integral is finished with an
/// adaptive Gauss-Kronrod rule so the boundary layer near |w| = 1 cannot
/// degrade the result. Absolute accuracy ~1e-13 or better.
double bvn_upper(double u, double v, double w);

/// E[X1 1{X1 > u, X2 > v}]: first moment of the pair restricted to the
/// upper orthant (not normalized by its probability).
double trunc_m10(double u, double v, double w);

/// E[X1 X2 1{X1 > u, X2 > v}]: cross moment of the pair restricted to the
/// upper orthant (not normalized). Symmetric in (u, v).
double trunc_m11(double u, double v, double w);

/// Modified Bessel function of the second kind, real order kappa > 0,
/// argument x > 0. Temme's series for x <= 2, a Thompson-Barnett
/// continued fraction beyond, then stable upward recurrence in the order.
/// Relative accuracy ~1e-12 for kappa in (0, 10], x in (1e-6, 50].
double bessel_k(double kappa, double x);

}  // namespace spatrisk
