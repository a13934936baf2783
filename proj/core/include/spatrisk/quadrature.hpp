#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spatrisk/errors.hpp"

namespace spatrisk {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  int max_depth = 48;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;     // accumulated error estimate
  bool converged = true;  // false if some panel hit max_depth above tolerance
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK tables).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGk15WeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGk15WeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
void gk15_panel(F&& f, double a, double b, double& result, double& err) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double fv[8];
  for (int i = 0; i < 7; ++i) {
    const double dx = hw * kGk15Nodes[i];
    fv[i] = f(c - dx) + f(c + dx);
  }
  fv[7] = f(c);
  double resk = kGk15WeightsK[7] * fv[7];
  double resg = kGk15WeightsG[3] * fv[7];
  for (int i = 0; i < 7; ++i) resk += kGk15WeightsK[i] * fv[i];
  for (int i = 0; i < 3; ++i) resg += kGk15WeightsG[i] * fv[2 * i + 1];
  result = resk * hw;
  const double diff = std::fabs((resk - resg) * hw);
  // QUADPACK-style sharpened estimate: the Kronrod error decays much
  // faster than |K-G| once the panel resolves the integrand.
  err = std::min(diff, std::pow(200.0 * diff, 1.5));
}

template <class F>
void integrate_rec(F&& f, double a, double b, double tol, int depth,
                   const QuadratureConfig& cfg, QuadratureResult& out) {
  double panel = 0.0, perr = 0.0;
  gk15_panel(f, a, b, panel, perr);
  if (perr <= tol || depth >= cfg.max_depth) {
    out.value += panel;
    out.error += perr;
    if (perr > tol) out.converged = false;
    return;
  }
  const double c = 0.5 * (a + b);
  integrate_rec(f, a, c, 0.5 * tol, depth + 1, cfg, out);
  integrate_rec(f, c, b, 0.5 * tol, depth + 1, cfg, out);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b] to the requested
/// absolute tolerance.
template <class F>
QuadratureResult integrate(F&& f, double a, double b,
                           const QuadratureConfig& cfg = {}) {
  QuadratureResult out;
  if (a == b) return out;
  detail::integrate_rec(f, a, b, cfg.abs_tol, 0, cfg, out);
  return out;
}

/// Integrates across [a, b] split at the interior breakpoints (kinks,
/// support edges, density branch points). Breakpoints outside (a, b) are
/// ignored; they need not be sorted.
template <class F>
QuadratureResult integrate_split(F&& f, double a, double b,
                                 std::vector<double> breakpoints,
                                 const QuadratureConfig& cfg = {}) {
  std::erase_if(breakpoints, [&](double x) { return !(x > a && x < b); });
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  QuadratureResult out;
  const double tol = cfg.abs_tol / static_cast<double>(breakpoints.size() - 1);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (breakpoints[i] == breakpoints[i + 1]) continue;
    QuadratureResult part;
    detail::integrate_rec(f, breakpoints[i], breakpoints[i + 1], tol, 0, cfg, part);
    out.value += part.value;
    out.error += part.error;
    out.converged = out.converged && part.converged;
  }
  return out;
}

}  // namespace spatrisk
