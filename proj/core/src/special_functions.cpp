#include "spatrisk/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spatrisk/errors.hpp"
#include "spatrisk/quadrature.hpp"

namespace spatrisk {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kSqrt1_2 = 0.7071067811865475244008444;
constexpr double kTwoPi = 6.2831853071795864769252868;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(what) + ": non-finite input");
}

}  // namespace

double norm_pdf(double x) {
  require_finite(x, "norm_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
  require_finite(x, "norm_cdf");
  return 0.5 * std::erfc(-x * kSqrt1_2);
}

double norm_sf(double x) {
  require_finite(x, "norm_sf");
  return 0.5 * std::erfc(x * kSqrt1_2);
}

double norm_quantile(double p) {
  // Wichura (1988), algorithm AS 241, PPND16.
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("norm_quantile: p outside (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
              3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
            4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
            2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
            5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

namespace {

// Gauss-Legendre half-rules (symmetric +/- pairs), as used by Genz for the
// bivariate normal path integral.
constexpr double kGl6X[3] = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
constexpr double kGl6W[3] = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr double kGl12X[6] = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                              0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
constexpr double kGl12W[6] = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                              0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
constexpr double kGl20X[10] = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                               0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                               0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                               0.07652652113349733};
constexpr double kGl20W[10] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                               0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                               0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                               0.1527533871307259};

// Integrand of the arcsine-path representation
//   P(X>u, Y>v; w) = sf(u) sf(v) + (1/2pi) int_0^{asin w} g(t) dt,
//   g(t) = exp(-(u^2 + v^2 - 2 u v sin t) / (2 cos^2 t)).
struct PathIntegrand {
  double u2v2half;  // (u^2 + v^2)/2
  double uv;
  double operator()(double t) const {
    const double s = std::sin(t);
    const double c2 = 1.0 - s * s;
    return std::exp((uv * s - u2v2half) / c2);
  }
};

double path_integral_gl(const PathIntegrand& g, double upper, double aw) {
  const double c = 0.5 * upper;
  double sum = 0.0;
  if (aw < 0.3) {
    for (int i = 0; i < 3; ++i) sum += kGl6W[i] * (g(c * (1.0 - kGl6X[i])) + g(c * (1.0 + kGl6X[i])));
  } else if (aw < 0.75) {
    for (int i = 0; i < 6; ++i) sum += kGl12W[i] * (g(c * (1.0 - kGl12X[i])) + g(c * (1.0 + kGl12X[i])));
  } else {
    for (int i = 0; i < 10; ++i) sum += kGl20W[i] * (g(c * (1.0 - kGl20X[i])) + g(c * (1.0 + kGl20X[i])));
  }
  return sum * c;
}

}  // namespace

double bvn_upper(double u, double v, double w) {
  require_finite(u, "bvn_upper");
  require_finite(v, "bvn_upper");
  if (!(w >= -1.0 && w <= 1.0)) throw std::domain_error("bvn_upper: correlation outside [-1,1]");
  if (v < u) std::swap(u, v);  // symmetric in (u, v)
  if (w == 1.0) return norm_sf(v);
  if (w == -1.0) return std::max(0.0, norm_sf(u) + norm_sf(v) - 1.0);

  const double base = norm_sf(u) * norm_sf(v);
  if (w == 0.0) return base;

  const PathIntegrand g{0.5 * (u * u + v * v), u * v};
  const double upper = std::asin(w);
  const double aw = std::fabs(w);
  double integral;
  if (aw <= 0.925) {
    integral = path_integral_gl(g, upper, aw);
  } else {
    // Fixed rules lose accuracy against the cos^2 boundary layer as
    // |w| -> 1; hand the path to the adaptive rule instead.
    QuadratureConfig cfg{1e-13, 40};
    integral = integrate(g, 0.0, upper, cfg).value;
  }
  return std::clamp(base + integral / kTwoPi, 0.0, 1.0);
}

double trunc_m10(double u, double v, double w) {
  require_finite(u, "trunc_m10");
  require_finite(v, "trunc_m10");
  if (!(w > -1.0 && w < 1.0)) throw std::domain_error("trunc_m10: correlation outside (-1,1)");
  const double s = std::sqrt((1.0 - w) * (1.0 + w));
  return norm_pdf(u) * norm_sf((v - w * u) / s) + w * norm_pdf(v) * norm_sf((u - w * v) / s);
}

double trunc_m11(double u, double v, double w) {
  require_finite(u, "trunc_m11");
  require_finite(v, "trunc_m11");
  if (!(w > -1.0 && w < 1.0)) throw std::domain_error("trunc_m11: correlation outside (-1,1)");
  if (v < u) std::swap(u, v);  // symmetric in (u, v)
  const double s2 = (1.0 - w) * (1.0 + w);
  const double s = std::sqrt(s2);
  const double quad_form = u * u - 2.0 * w * u * v + v * v;  // >= 0 for |w| <= 1
  return w * bvn_upper(u, v, w) +
         w * u * norm_pdf(u) * norm_sf((v - w * u) / s) +
         w * v * norm_pdf(v) * norm_sf((u - w * v) / s) +
         s / kTwoPi * std::exp(-0.5 * quad_form / s2);
}

namespace {

// Temme's coefficients gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu))/(2 mu) and
// gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu))/2 for |mu| <= 1/2. The direct
// evaluation of gam1 cancels as mu -> 0, so a short even Taylor series
// (coefficients from the reciprocal-gamma expansion) takes over there.
void temme_gam(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
  gampl = 1.0 / std::tgamma(1.0 + mu);
  gammi = 1.0 / std::tgamma(1.0 - mu);
  gam2 = 0.5 * (gammi + gampl);
  if (std::fabs(mu) > 0.1) {
    gam1 = (gammi - gampl) / (2.0 * mu);
  } else {
    const double m2 = mu * mu;
    gam1 = -0.57721566490153286061 +
           m2 * (0.04200263503409523553 +
                 m2 * (0.04219773455554433675 +
                       m2 * (-0.0072189432466630995424 +
                             m2 * 0.00021524167411495097282)));
  }
}

constexpr int kBesselMaxIter = 20000;
constexpr double kBesselEps = 1e-17;

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, x <= 2 (Temme 1975 series).
void bessel_k_temme(double mu, double x, double& kmu, double& kmup1) {
  const double xhalf = 0.5 * x;
  const double pimu = 3.141592653589793238463 * mu;
  const double fact = (std::fabs(pimu) < 1e-15) ? 1.0 : pimu / std::sin(pimu);
  const double lnxh = -std::log(xhalf);
  double e = mu * lnxh;
  const double fact2 = (std::fabs(e) < 1e-15) ? 1.0 : std::sinh(e) / e;
  double gam1, gam2, gampl, gammi;
  temme_gam(mu, gam1, gam2, gampl, gammi);
  double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * lnxh);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / gampl;
  double q = 0.5 / (e * gammi);
  double c = 1.0;
  const double d = xhalf * xhalf;
  double sum1 = p;
  const double mu2 = mu * mu;
  for (int i = 1; i <= kBesselMaxIter; ++i) {
    ff = (i * ff + p + q) / (i * i - mu2);
    c *= d / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * ff;
    sum += del;
    sum1 += c * (p - i * ff);
    if (std::fabs(del) < std::fabs(sum) * kBesselEps) break;
  }
  kmu = sum;
  kmup1 = sum1 * (2.0 / x);
}

// Same pair for x > 2 via the Thompson-Barnett continued fraction CF2.
void bessel_k_cf2(double mu, double x, double& kmu, double& kmup1) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - mu * mu;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= kBesselMaxIter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) < kBesselEps) break;
  }
  h = a1 * h;
  kmu = std::sqrt(3.141592653589793238463 / (2.0 * x)) * std::exp(-x) / s;
  kmup1 = kmu * (mu + x + 0.5 - h) / x;
}

}  // namespace

double bessel_k(double kappa, double x) {
  if (!std::isfinite(kappa) || !std::isfinite(x) || kappa <= 0.0 || x <= 0.0)
    throw std::domain_error("bessel_k: requires kappa > 0 and x > 0");
  const int nl = static_cast<int>(kappa + 0.5);
  const double mu = kappa - nl;  // in [-1/2, 1/2]
  double kmu, kmup1;
  if (x <= 2.0)
    bessel_k_temme(mu, x, kmu, kmup1);
  else
    bessel_k_cf2(mu, x, kmu, kmup1);
  const double two_over_x = 2.0 / x;
  for (int i = 1; i <= nl; ++i) {
    const double knext = (mu + i) * two_over_x * kmup1 + kmu;
    kmu = kmup1;
    kmup1 = knext;
  }
  return kmu;
}

}  // namespace spatrisk
