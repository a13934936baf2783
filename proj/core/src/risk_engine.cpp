#include "spatrisk/risk_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "parallel_for.hpp"
#include "spatrisk/errors.hpp"

namespace spatrisk {

namespace {

// Shared implementation of the scaled and unscaled quadratures:
// r1 = int f(h; region) G(lambda h, u) dh over the region's support,
// split at the density branch point and the scaled support edge.
RiskResult risk_impl(double lambda, const Region& region,
                     const CorrelationModel& model, double u,
                     const QuadratureConfig& quad) {
  double upper = max_pair_distance(region);
  std::vector<double> breaks;
  if (region.shape == RegionShape::square)
    breaks.push_back(region.size * region.lambda);
  if (has_compact_support(model.family)) {
    const double edge = model.theta / lambda;
    // The integrand vanishes identically beyond the support edge.
    if (edge < upper) {
      upper = edge;
      breaks.clear();
      if (region.shape == RegionShape::square &&
          region.size * region.lambda < upper)
        breaks.push_back(region.size * region.lambda);
    }
  } else {
    breaks.push_back(model.theta / lambda);
  }
  auto integrand = [&](double h) {
    return pair_distance_density(region, h) *
           damage_cov_rho(eval(model, lambda * h), u);
  };
  QuadratureResult r = integrate_split(integrand, 0.0, upper, breaks, quad);
  if (!r.converged)
    throw numerical_error("risk quadrature did not reach the requested tolerance");
  RiskResult out;
  out.r0 = r0_standard(u);
  out.r1 = r.value;
  out.r1_error = r.error;
  if (out.r1 < 0.0) {
    if (out.r1 < -10.0 * quad.abs_tol)
      throw numerical_error("risk quadrature produced a negative variance");
    out.r1 = 0.0;
  }
  return out;
}

bool placements_overlap(const RegionPlacement& a, const RegionPlacement& b) {
  const double sa = a.region.size * a.region.lambda;
  const double sb = b.region.size * b.region.lambda;
  const bool disk_a = a.region.shape == RegionShape::disk;
  const bool disk_b = b.region.shape == RegionShape::disk;
  if (!disk_a && !disk_b) {
    return a.offset.x < b.offset.x + sb && b.offset.x < a.offset.x + sa &&
           a.offset.y < b.offset.y + sb && b.offset.y < a.offset.y + sa;
  }
  if (disk_a && disk_b) {
    return std::hypot(a.offset.x - b.offset.x, a.offset.y - b.offset.y) < sa + sb;
  }
  const RegionPlacement& disk = disk_a ? a : b;
  const RegionPlacement& box = disk_a ? b : a;
  const double side = box.region.size * box.region.lambda;
  const double cx = std::clamp(disk.offset.x, box.offset.x, box.offset.x + side);
  const double cy = std::clamp(disk.offset.y, box.offset.y, box.offset.y + side);
  return std::hypot(disk.offset.x - cx, disk.offset.y - cy) <
         disk.region.size * disk.region.lambda;
}

struct VarianceStats {
  double var = 0.0;
  double se = 0.0;
};

// Unbiased variance of v with the jackknife SE of that variance.
VarianceStats variance_with_se(const std::vector<double>& v) {
  const auto m = static_cast<double>(v.size());
  double sum = 0.0, q = 0.0;
  for (double x : v) {
    sum += x;
    q += x * x;
  }
  const double mean = sum / m;
  VarianceStats out;
  out.var = (q - m * mean * mean) / (m - 1.0);
  std::vector<double> loo(v.size());
  double loo_mean = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double s_j = sum - v[j];
    const double q_j = q - v[j] * v[j];
    loo[j] = (q_j - s_j * s_j / (m - 1.0)) / (m - 2.0);
    loo_mean += loo[j];
  }
  loo_mean /= m;
  double dev = 0.0;
  for (double x : loo) dev += (x - loo_mean) * (x - loo_mean);
  out.se = std::sqrt((m - 1.0) / m * dev);
  return out;
}

// Jackknife SE of an arbitrary statistic fn over replicate triples.
template <class Fn>
double jackknife_se(const std::vector<double>& la, const std::vector<double>& lb,
                    const std::vector<double>& lu, Fn&& fn) {
  const std::size_t m = la.size();
  std::vector<double> loo(m);
  std::vector<double> a(la), b(lb), u(lu);
  // Leave-one-out by swapping the j-th entry to the back and shrinking.
  double mean = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    std::swap(a[j], a[m - 1]);
    std::swap(b[j], b[m - 1]);
    std::swap(u[j], u[m - 1]);
    loo[j] = fn(std::span(a.data(), m - 1), std::span(b.data(), m - 1),
                std::span(u.data(), m - 1));
    std::swap(a[j], a[m - 1]);
    std::swap(b[j], b[m - 1]);
    std::swap(u[j], u[m - 1]);
    mean += loo[j];
  }
  mean /= static_cast<double>(m);
  double dev = 0.0;
  for (double x : loo) dev += (x - mean) * (x - mean);
  return std::sqrt((static_cast<double>(m) - 1.0) / static_cast<double>(m) * dev);
}

double span_variance(std::span<const double> v) {
  double sum = 0.0, q = 0.0;
  for (double x : v) {
    sum += x;
    q += x * x;
  }
  const auto m = static_cast<double>(v.size());
  const double mean = sum / m;
  return (q - m * mean * mean) / (m - 1.0);
}

}  // namespace

RiskResult risk_standard(const Region& region, const CorrelationModel& model,
                         double u, const QuadratureConfig& quad) {
  return risk_impl(1.0, region, model, u, quad);
}

RiskResult risk_scaled(double lambda, const Region& region,
                       const CorrelationModel& model, double u,
                       const QuadratureConfig& quad) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw std::domain_error("risk_scaled: lambda must be positive");
  return risk_impl(lambda, region, model, u, quad);
}

RiskResult risk_general(const Region& region, const CorrelationModel& model,
                        const Marginal& marginal, double u_raw,
                        const QuadratureConfig& quad) {
  if (!(marginal.sigma2 > 0.0) || !std::isfinite(marginal.sigma2))
    throw std::domain_error("risk_general: sigma2 must be positive");
  const double sigma = std::sqrt(marginal.sigma2);
  const double u0 = (u_raw - marginal.mu) / sigma;
  RiskResult r = risk_standard(region, model, u0, quad);
  return {sigma * r.r0, marginal.sigma2 * r.r1, marginal.sigma2 * r.r1_error};
}

SubadditivityReport check_subadditivity(const RegionPlacement& a,
                                        const RegionPlacement& b,
                                        const CorrelationModel& model, double u,
                                        const MCConfig& mc, unsigned threads) {
  if (placements_overlap(a, b))
    throw std::domain_error("check_subadditivity: regions overlap");
  if (mc.m_reps < 3)
    throw std::domain_error("check_subadditivity: need at least 3 replicates");

  const Rng root(mc.seed);
  Rng grid_rng_a = root.substream(0);
  Rng grid_rng_b = root.substream(1);
  Grid ga = build_grid(a.region, mc.n_points, GridMode::stratified_jittered,
                       grid_rng_a, mc.max_grid_points);
  Grid gb = build_grid(b.region, mc.n_points, GridMode::stratified_jittered,
                       grid_rng_b, mc.max_grid_points);
  Grid grid_union;
  grid_union.points.reserve(ga.size() + gb.size());
  for (const Point2& p : ga.points)
    grid_union.points.push_back({p.x + a.offset.x, p.y + a.offset.y});
  for (const Point2& p : gb.points)
    grid_union.points.push_back({p.x + b.offset.x, p.y + b.offset.y});

  const FieldSampler sampler(grid_union, model, mc.jitter);
  const std::size_t na = ga.size();
  const std::size_t n = grid_union.size();
  const double area_a = area(a.region);
  const double area_b = area(b.region);
  const double wa = area_a / (area_a + area_b);

  const std::size_t m = mc.m_reps;
  std::vector<double> la(m), lb(m), lu(m);
  const Rng rep_base = root.substream(2);
  detail::parallel_for(m, threads, [&](std::size_t j) {
    Rng rng = rep_base.substream(j);
    const FieldSample x = sampler.sample(rng);
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < na; ++i)
      if (x[i] > u) sa += x[i] - u;
    for (std::size_t i = na; i < n; ++i)
      if (x[i] > u) sb += x[i] - u;
    la[j] = sa / static_cast<double>(na);
    lb[j] = sb / static_cast<double>(n - na);
    lu[j] = wa * la[j] + (1.0 - wa) * lb[j];
  });

  SubadditivityReport rep;
  rep.m = m;
  rep.applied_jitter = sampler.applied_jitter();
  const VarianceStats va = variance_with_se(la);
  const VarianceStats vb = variance_with_se(lb);
  const VarianceStats vu = variance_with_se(lu);
  rep.r1_a = va.var;
  rep.se_a = va.se;
  rep.r1_b = vb.var;
  rep.se_b = vb.se;
  rep.r1_union = vu.var;
  rep.se_union = vu.se;
  rep.sub_margin = va.var + vb.var - vu.var;
  rep.se_sub_margin = jackknife_se(
      la, lb, lu, [](std::span<const double> xa, std::span<const double> xb,
                     std::span<const double> xu) {
        return span_variance(xa) + span_variance(xb) - span_variance(xu);
      });
  rep.subadditive_within_3sigma = rep.sub_margin >= -3.0 * rep.se_sub_margin;
  rep.min_component = std::min(va.var, vb.var);
  rep.super_subadditive_observed = vu.var <= rep.min_component;
  return rep;
}

}  // namespace spatrisk
