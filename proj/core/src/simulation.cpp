#include "spatrisk/simulation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parallel_for.hpp"
#include "spatrisk/errors.hpp"
#include "spatrisk/risk_engine.hpp"

namespace spatrisk {

namespace {

Grid build_square_grid(const Region& region, std::size_t n, GridMode mode, Rng& rng) {
  const double side = region.size * region.lambda;
  const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  Grid grid;
  grid.points.reserve(n);
  for (std::size_t row = 0; row < k && grid.points.size() < n; ++row) {
    for (std::size_t col = 0; col < k && grid.points.size() < n; ++col) {
      const double jx = mode == GridMode::regular ? 0.5 : rng.uniform();
      const double jy = mode == GridMode::regular ? 0.5 : rng.uniform();
      grid.points.push_back({(col + jx) / k * side, (row + jy) / k * side});
    }
  }
  return grid;
}

Grid build_disk_grid(const Region& region, std::size_t n, GridMode mode, Rng& rng) {
  const double radius = region.size * region.lambda;
  // Each lattice refinement uses a fresh substream so a failed attempt
  // cannot shift the points of the next one; drawing the fork advances the
  // caller's stream.
  const Rng fork = rng.substream(rng.next_u64());
  // Start from the cell count matching the disk/bounding-box area ratio and
  // grow the lattice until enough cells land inside.
  auto k = static_cast<std::size_t>(
      std::ceil(std::sqrt(4.0 * static_cast<double>(n) / 3.141592653589793)));
  for (;; ++k) {
    Grid grid;
    grid.points.reserve(n);
    Rng attempt = fork.substream(k);
    const double cell = 2.0 * radius / k;
    for (std::size_t row = 0; row < k && grid.points.size() < n; ++row) {
      for (std::size_t col = 0; col < k && grid.points.size() < n; ++col) {
        if (mode == GridMode::regular) {
          const Point2 p{-radius + (col + 0.5) * cell, -radius + (row + 0.5) * cell};
          if (p.x * p.x + p.y * p.y <= radius * radius) grid.points.push_back(p);
        } else {
          for (int tries = 0; tries < 16; ++tries) {
            const Point2 p{-radius + (col + attempt.uniform()) * cell,
                           -radius + (row + attempt.uniform()) * cell};
            if (p.x * p.x + p.y * p.y <= radius * radius) {
              grid.points.push_back(p);
              break;
            }
          }
        }
      }
    }
    if (grid.points.size() == n) return grid;
  }
}

}  // namespace

Grid build_grid(const Region& region, std::size_t n, GridMode mode, Rng& rng,
                std::size_t max_points) {
  if (n < 2) throw std::domain_error("build_grid: need at least 2 points");
  if (n > max_points)
    throw resource_error("build_grid: " + std::to_string(n) +
                         " points exceeds the configured maximum of " +
                         std::to_string(max_points));
  return region.shape == RegionShape::square ? build_square_grid(region, n, mode, rng)
                                             : build_disk_grid(region, n, mode, rng);
}

FieldSampler::FieldSampler(const Grid& grid, const CorrelationModel& model,
                           double jitter) {
  n_ = grid.size();
  if (n_ == 0) throw std::domain_error("FieldSampler: empty grid");
  Eigen::MatrixXd cov(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    cov(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double h = std::hypot(grid.points[i].x - grid.points[j].x,
                                  grid.points[i].y - grid.points[j].y);
      cov(i, j) = cov(j, i) = eval(model, h);
    }
  }
  auto attempt = [&](double jit) {
    Eigen::MatrixXd m = cov;
    if (jit > 0.0) m.diagonal().array() += jit;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    return std::pair{llt.info() == Eigen::Success, Eigen::MatrixXd(llt.matrixL())};
  };
  auto [ok, lower] = attempt(jitter);
  double used = jitter;
  if (!ok && jitter == 0.0) {
    std::tie(ok, lower) = attempt(1e-10);
    used = 1e-10;
  }
  if (!ok)
    throw numerical_error(
        "FieldSampler: covariance factorization failed (jitter " +
        std::to_string(used) + "); increase the jitter");
  applied_jitter_ = used;
  chol_.resize(n_ * (n_ + 1) / 2);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j <= i; ++j) chol_[idx++] = lower(i, j);
}

FieldSample FieldSampler::sample(Rng& rng) const {
  std::vector<double> z(n_);
  for (double& v : z) v = rng.normal();
  FieldSample x(n_);
  const double* row = chol_.data();
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += row[j] * z[j];
    x[i] = acc;
    row += i + 1;
  }
  return x;
}

double FieldSampler::sample_loss(Rng& rng, double u) const {
  const double t[1] = {u};
  double out[1];
  sample_losses(rng, t, out);
  return out[0];
}

void FieldSampler::sample_losses(Rng& rng, std::span<const double> thresholds,
                                 std::span<double> out) const {
  std::vector<double> z(n_);
  for (double& v : z) v = rng.normal();
  for (double& o : out) o = 0.0;
  const double* row = chol_.data();
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += row[j] * z[j];
    for (std::size_t t = 0; t < thresholds.size(); ++t)
      if (acc > thresholds[t]) out[t] += acc - thresholds[t];
    row += i + 1;
  }
  for (double& o : out) o /= static_cast<double>(n_);
}

std::vector<FieldSample> sample_fields(const FieldSampler& sampler, std::size_t m,
                                       const Rng& base, unsigned threads) {
  std::vector<FieldSample> out(m);
  detail::parallel_for(m, threads, [&](std::size_t j) {
    Rng rng = base.substream(j);
    out[j] = sampler.sample(rng);
  });
  return out;
}

M1Result m1_from_losses(std::span<const double> losses) {
  const std::size_t m = losses.size();
  if (m < 2) throw std::domain_error("m1_estimate: need at least 2 replicates");
  double sum = 0.0;
  for (double l : losses) sum += l;
  const double mean = sum / static_cast<double>(m);
  double ss = 0.0;
  for (double l : losses) ss += (l - mean) * (l - mean);
  const double var = ss / static_cast<double>(m - 1);

  M1Result result{mean, var, 0.0, m};
  if (m < 3) return result;
  // Jackknife over replicates: closed-form leave-one-out variances.
  const double md = static_cast<double>(m);
  double q = 0.0;
  for (double l : losses) q += l * l;
  std::vector<double> loo(m);
  double loo_mean = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double s_j = sum - losses[j];
    const double q_j = q - losses[j] * losses[j];
    loo[j] = (q_j - s_j * s_j / (md - 1.0)) / (md - 2.0);
    loo_mean += loo[j];
  }
  loo_mean /= md;
  double dev = 0.0;
  for (double v : loo) dev += (v - loo_mean) * (v - loo_mean);
  result.stderr_r1 = std::sqrt((md - 1.0) / md * dev);
  return result;
}

M1Result m1_estimate(const std::vector<FieldSample>& samples, double u) {
  if (samples.size() < 2)
    throw std::domain_error("m1_estimate: need at least 2 replicates");
  std::vector<double> losses(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const FieldSample& x = samples[j];
    double acc = 0.0;
    for (double v : x)
      if (v > u) acc += v - u;
    losses[j] = acc / static_cast<double>(x.size());
  }
  return m1_from_losses(losses);
}

std::vector<double> loss_series(const FieldSampler& sampler, std::size_t m,
                                const Rng& base, double u, unsigned threads) {
  std::vector<double> losses(m);
  detail::parallel_for(m, threads, [&](std::size_t j) {
    Rng rng = base.substream(j);
    losses[j] = sampler.sample_loss(rng, u);
  });
  return losses;
}

std::vector<StudyRow> relative_error_study(const StudyConfig& config,
                                           unsigned threads) {
  const std::size_t n_fam = config.families.size();
  const std::size_t n_p = config.probs.size();
  const auto runs = static_cast<std::size_t>(config.runs);
  if (n_fam == 0 || n_p == 0 || runs == 0)
    throw std::domain_error("relative_error_study: empty configuration");

  std::vector<double> thresholds(n_p);
  for (std::size_t i = 0; i < n_p; ++i) thresholds[i] = norm_quantile(config.probs[i]);

  // Quadrature references, one per (family, p).
  std::vector<double> r1_quad(n_fam * n_p);
  std::vector<CorrelationModel> models(n_fam);
  for (std::size_t f = 0; f < n_fam; ++f) {
    models[f] = {config.families[f], config.theta, config.matern_kappa};
    for (std::size_t i = 0; i < n_p; ++i)
      r1_quad[f * n_p + i] =
          risk_standard(config.region, models[f], thresholds[i], config.quad).r1;
  }

  const Rng root(config.mc.seed);
  // r1_mc indexed by (family, run, p); filled in parallel over (family, run).
  std::vector<double> r1_mc(n_fam * runs * n_p);
  detail::parallel_for(n_fam * runs, threads, [&](std::size_t w) {
    const std::size_t f = w / runs;
    const std::size_t r = w % runs;
    const Rng run_stream = root.substream(f).substream(r);
    Rng grid_rng = run_stream.substream(0);
    const Rng rep_base = run_stream.substream(1);
    Grid grid = build_grid(config.region, config.mc.n_points, config.mode, grid_rng,
                           config.mc.max_grid_points);
    const FieldSampler sampler(grid, models[f], config.mc.jitter);
    std::vector<double> losses(config.mc.m_reps * n_p);
    for (std::size_t j = 0; j < config.mc.m_reps; ++j) {
      Rng rep = rep_base.substream(j);
      sampler.sample_losses(rep, thresholds,
                            std::span(losses).subspan(j * n_p, n_p));
    }
    for (std::size_t i = 0; i < n_p; ++i) {
      std::vector<double> per_threshold(config.mc.m_reps);
      for (std::size_t j = 0; j < config.mc.m_reps; ++j)
        per_threshold[j] = losses[j * n_p + i];
      r1_mc[(f * runs + r) * n_p + i] = m1_from_losses(per_threshold).r1_hat;
    }
  });

  std::vector<StudyRow> rows;
  rows.reserve(n_fam * n_p * runs);
  for (std::size_t f = 0; f < n_fam; ++f)
    for (std::size_t i = 0; i < n_p; ++i)
      for (std::size_t r = 0; r < runs; ++r) {
        const double mc = r1_mc[(f * runs + r) * n_p + i];
        const double ref = r1_quad[f * n_p + i];
        rows.push_back({config.families[f], config.probs[i], static_cast<int>(r), mc,
                        ref, (mc - ref) / ref});
      }
  return rows;
}

}  // namespace spatrisk
