#include "spatrisk/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "spatrisk/damage_covariance.hpp"
#include "spatrisk/risk_engine.hpp"
#include "spatrisk/simulation.hpp"
#include "spatrisk/special_functions.hpp"

namespace spatrisk::validation {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double orthant_moment_oracle(double u, double v, double w, int px, int py,
                             double tol) {
  const double s2 = 1.0 - w * w;
  const double s = std::sqrt(s2);
  const double norm = 1.0 / (2.0 * 3.141592653589793238463 * s);
  const double ux = u + 12.0, vy = v + 12.0;
  auto inner = [&](double x) {
    auto f = [&](double y) {
      const double e = -(x * x - 2.0 * w * x * y + y * y) / (2.0 * s2);
      double weight = 1.0;
      for (int i = 0; i < px; ++i) weight *= x;
      for (int i = 0; i < py; ++i) weight *= y;
      return weight * std::exp(e);
    };
    // For |w| near 1 the mass sits in a ridge of width ~sqrt(1-w^2)
    // around y = w x; split there so coarse panels cannot step over it.
    const double center = w * x;
    double cuts[3] = {center - 8.0 * s, center, center + 8.0 * s};
    double lo = v, total = 0.0;
    for (double c : cuts)
      if (c > lo && c < vy) {
        total += adaptive_simpson(f, lo, c, tol * 1e-2);
        lo = c;
      }
    total += adaptive_simpson(f, lo, vy, tol * 1e-2);
    return total;
  };
  return norm * adaptive_simpson(inner, u, ux, tol);
}

double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = cdf(samples[i]);
    d = std::max(d, std::fabs(c - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - c));
  }
  return d;
}

namespace {

CheckResult check_density_normalization(bool inject_failure) {
  CheckResult out{"density-normalization", false, 0.0,
                  inject_failure ? 1e-18 : 1e-10, ""};
  double worst = 0.0;
  for (RegionShape shape : {RegionShape::disk, RegionShape::square}) {
    for (double r : {0.5, 1.0, 3.0}) {
      const Region region{shape, r, 1.0};
      auto f = [&](double h) { return pair_distance_density(region, h); };
      std::vector<double> breaks;
      if (shape == RegionShape::square) breaks.push_back(r);
      const double integral =
          integrate_split(f, 0.0, max_pair_distance(region), breaks,
                          QuadratureConfig{1e-12, 48})
              .value;
      worst = std::max(worst, std::fabs(integral - 1.0));
    }
  }
  out.measured = worst;
  out.pass = worst <= out.bound;
  out.detail = "max |int f - 1| over both shapes, R in {0.5, 1, 3}";
  return out;
}

CheckResult check_bvn_oracle(std::uint64_t seed) {
  CheckResult out{"bivariate-orthant-oracle", false, 0.0, 1e-8, ""};
  Rng rng = Rng(seed).substream(101);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double u = -3.0 + 6.0 * rng.uniform();
    const double v = -3.0 + 6.0 * rng.uniform();
    const double w = -0.99 + 1.98 * rng.uniform();
    worst = std::max(worst, std::fabs(bvn_upper(u, v, w) -
                                      orthant_moment_oracle(u, v, w, 0, 0)));
    worst = std::max(worst, std::fabs(trunc_m10(u, v, w) -
                                      orthant_moment_oracle(u, v, w, 1, 0)));
    worst = std::max(worst, std::fabs(trunc_m11(u, v, w) -
                                      orthant_moment_oracle(u, v, w, 1, 1)));
  }
  out.measured = worst;
  out.pass = worst <= out.bound;
  out.detail = "50 random (u,v,w) configs vs 2-D quadrature";
  return out;
}

CheckResult check_m1_vs_quadrature(std::uint64_t seed, unsigned threads) {
  CheckResult out{"m1-vs-quadrature", false, 0.0, 3.0, ""};
  const Region region{RegionShape::square, 1.0, 1.0};
  const CorrelationModel model{CorrelationFamily::exponential, 0.5, 1.0};
  const double u = norm_quantile(0.75);
  const double r1_quad = risk_standard(region, model, u).r1;
  const Rng root = Rng(seed).substream(102);
  Rng grid_rng = root.substream(0);
  Grid grid = build_grid(region, 225, GridMode::stratified_jittered, grid_rng);
  const FieldSampler sampler(grid, model);
  const std::vector<double> losses =
      loss_series(sampler, 1000, root.substream(1), u, threads);
  const M1Result m1 = m1_from_losses(losses);
  out.measured = std::fabs(m1.r1_hat - r1_quad) / m1.stderr_r1;
  out.pass = out.measured <= out.bound;
  char buf[160];
  std::snprintf(buf, sizeof buf, "r1_mc=%.10g r1_quad=%.10g stderr=%.3g",
                m1.r1_hat, r1_quad, m1.stderr_r1);
  out.detail = buf;
  return out;
}

void append_subadditivity_checks(std::vector<CheckResult>& checks,
                                 std::uint64_t seed, unsigned threads) {
  const CorrelationModel model{CorrelationFamily::exponential, 0.5, 1.0};
  const double u = norm_quantile(0.75);
  const Region unit{RegionShape::square, 1.0, 1.0};
  MCConfig mc;
  mc.n_points = 144;
  mc.m_reps = 2000;

  mc.seed = Rng(seed).substream(103).seed();
  const SubadditivityReport adj = check_subadditivity(
      {unit, {0.0, 0.0}}, {unit, {1.0, 0.0}}, model, u, mc, threads);
  checks.push_back({"subadditivity-adjacent", adj.subadditive_within_3sigma,
                    adj.sub_margin, -3.0 * adj.se_sub_margin,
                    "margin r1_a + r1_b - r1_union must stay >= bound"});

  mc.seed = Rng(seed).substream(104).seed();
  const SubadditivityReport far = check_subadditivity(
      {unit, {0.0, 0.0}}, {unit, {30.0, 0.0}}, model, u, mc, threads);
  checks.push_back({"subadditivity-distant", far.subadditive_within_3sigma,
                    far.sub_margin, -3.0 * far.se_sub_margin,
                    "margin r1_a + r1_b - r1_union must stay >= bound"});
  // Independent halves: r1_union should match (r1_a + r1_b)/4.
  const double t = far.r1_union - 0.25 * (far.r1_a + far.r1_b);
  const double se_t = std::sqrt(far.se_union * far.se_union +
                                0.0625 * (far.se_a * far.se_a + far.se_b * far.se_b));
  checks.push_back({"distant-union-quarter-rule", std::fabs(t) <= 3.0 * se_t,
                    std::fabs(t) / se_t, 3.0,
                    "r1_union vs (r1_a + r1_b)/4 in units of its SE"});
}

CheckResult check_anti_monotonicity() {
  CheckResult out{"anti-monotonicity", false, 0.0, 1e-9, ""};
  const double u = norm_quantile(0.75);
  double worst = 0.0;
  for (CorrelationFamily family : kAllFamilies) {
    const CorrelationModel model{family, 0.5, 1.0};
    double prev = 0.0;
    bool first = true;
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
      const double r1 = risk_standard({RegionShape::square, r, 1.0}, model, u).r1;
      if (!first) worst = std::max(worst, r1 - prev);
      prev = r1;
      first = false;
    }
  }
  out.measured = worst;
  out.pass = worst <= out.bound;
  out.detail = "max increase of r1 across growing squares, all families";
  return out;
}

CheckResult check_lambda_monotonicity() {
  CheckResult out{"lambda-sweep-monotone", false, 0.0, 1e-9, ""};
  const double u = norm_quantile(0.75);
  const Region unit{RegionShape::square, 1.0, 1.0};
  double worst = 0.0;
  for (CorrelationFamily family : kAllFamilies) {
    const CorrelationModel model{family, 0.5, 1.0};
    double prev = 0.0;
    bool first = true;
    for (int i = 0; i < 20; ++i) {
      const double lambda = 0.1 + i * (10.0 - 0.1) / 19.0;
      const double r1 = risk_scaled(lambda, unit, model, u).r1;
      if (!first) worst = std::max(worst, r1 - prev);
      prev = r1;
      first = false;
    }
  }
  out.measured = worst;
  out.pass = worst <= out.bound;
  out.detail = "max increase of r1 over 20 lambda values, all families";
  return out;
}

CheckResult check_determinism(std::uint64_t seed, unsigned threads) {
  CheckResult out{"repeat-run-determinism", false, 0.0, 0.0, ""};
  StudyConfig cfg;
  cfg.families = {CorrelationFamily::exponential};
  cfg.probs = {0.75};
  cfg.runs = 4;
  cfg.mc.n_points = 64;
  cfg.mc.m_reps = 200;
  cfg.mc.seed = Rng(seed).substream(105).seed();
  const auto a = relative_error_study(cfg, threads);
  const auto b = relative_error_study(cfg, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::fabs(a[i].r1_mc - b[i].r1_mc));
  out.measured = worst;
  out.pass = worst == 0.0;
  out.detail = "study rerun with 1 thread must match bitwise";
  return out;
}

}  // namespace

std::vector<CheckResult> run_all(const ValidateOptions& options) {
  std::vector<CheckResult> checks;
  checks.push_back(check_density_normalization(options.inject_failure));
  checks.push_back(check_bvn_oracle(options.seed));
  checks.push_back(check_m1_vs_quadrature(options.seed, options.threads));
  append_subadditivity_checks(checks, options.seed, options.threads);
  checks.push_back(check_anti_monotonicity());
  checks.push_back(check_lambda_monotonicity());
  checks.push_back(check_determinism(options.seed, options.threads));
  return checks;
}

std::string format_report(const std::vector<CheckResult>& checks,
                          std::uint64_t seed) {
  std::ostringstream os;
  os << "validation report (seed " << seed << ")\n";
  for (const CheckResult& c : checks) {
    char line[256];
    std::snprintf(line, sizeof line, "[%s] %-28s measured=%.12g bound=%.12g %s\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured, c.bound,
                  c.detail.c_str());
    os << line;
  }
  const std::size_t failed =
      static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(),
                                             [](const CheckResult& c) { return !c.pass; }));
  os << (failed == 0 ? "all checks passed\n"
                     : std::to_string(failed) + " check(s) failed\n");
  return os.str();
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

}  // namespace spatrisk::validation
