#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spatrisk/correlation.hpp"
#include "spatrisk/geometry.hpp"
#include "spatrisk/quadrature.hpp"
#include "spatrisk/rng.hpp"

namespace spatrisk {

struct Grid {
  std::vector<Point2> points;
  std::size_t size() const { return points.size(); }
};

enum class GridMode { regular, stratified_jittered };

struct MCConfig {
  std::size_t n_points = 225;
  std::size_t m_reps = 1000;
  std::uint64_t seed = 1;
  double jitter = 0.0;             // covariance diagonal regularization
  std::size_t max_grid_points = 10000;  // Cholesky cost guard
};

/// n points covering the region: lattice cell centers (regular) or one
/// uniform point per lattice cell (stratified-jittered). Points of a disk
/// region all satisfy the membership constraint.
Grid build_grid(const Region& region, std::size_t n, GridMode mode, Rng& rng,
                std::size_t max_points = 10000);

/// One realization of the standard field at the grid points.
using FieldSample = std::vector<double>;

/// Exact Gaussian field sampler: lower-triangular factor of the grid
/// covariance rho(||s_i - s_j||) + jitter I applied to i.i.d. normals.
/// If the plain factorization fails with jitter 0, one retry at 1e-10 is
/// attempted before giving up.
class FieldSampler {
 public:
  FieldSampler(const Grid& grid, const CorrelationModel& model, double jitter = 0.0);

  FieldSample sample(Rng& rng) const;

  /// Spatial average of the excess damage over the grid: the one-number
  /// reduction used by the M1 estimator (avoids storing the field).
  double sample_loss(Rng& rng, double u) const;

  /// Same replicate reduced against several thresholds at once.
  void sample_losses(Rng& rng, std::span<const double> thresholds,
                     std::span<double> out) const;

  std::size_t size() const { return n_; }
  double applied_jitter() const { return applied_jitter_; }

 private:
  std::size_t n_ = 0;
  double applied_jitter_ = 0.0;
  std::vector<double> chol_;  // packed lower triangle, row-major
};

/// m replicates; replicate j consumes base.substream(j), so the output is
/// reproducible and independent of the number of threads.
std::vector<FieldSample> sample_fields(const FieldSampler& sampler, std::size_t m,
                                       const Rng& base, unsigned threads = 1);

struct M1Result {
  double r0_hat = 0.0;
  double r1_hat = 0.0;
  double stderr_r1 = 0.0;  // jackknife standard error of r1_hat
  std::size_t m = 0;
};

/// Per replicate j: L_j = equal-weight average of (X(s_i) - u)^+ over the
/// grid. r0_hat is the mean of the L_j, r1_hat their unbiased sample
/// variance. Requires at least two replicates.
M1Result m1_estimate(const std::vector<FieldSample>& samples, double u);

/// Reduction of precomputed loss values (same statistics as m1_estimate).
M1Result m1_from_losses(std::span<const double> losses);

/// Losses for m replicates without materializing the fields; replicate j
/// uses base.substream(j).
std::vector<double> loss_series(const FieldSampler& sampler, std::size_t m,
                                const Rng& base, double u, unsigned threads = 1);

struct StudyRow {
  CorrelationFamily family;
  double p;
  int run;
  double r1_mc;
  double r1_quad;
  double rel_error;
};

struct StudyConfig {
  Region region{RegionShape::square, 1.0, 1.0};
  double theta = 0.5;
  double matern_kappa = 1.0;
  std::vector<CorrelationFamily> families{kAllFamilies.begin(), kAllFamilies.end()};
  std::vector<double> probs{0.75, 0.85, 0.95};
  int runs = 100;
  GridMode mode = GridMode::stratified_jittered;
  MCConfig mc;
  QuadratureConfig quad;
};

/// For each (family, p), `runs` independent M1 computations against the
/// one-dimensional quadrature value; each run draws a fresh grid in
/// stratified-jittered mode. Rows come out in (family, p, run) order and
/// are bitwise reproducible for a fixed seed, for any thread count.
std::vector<StudyRow> relative_error_study(const StudyConfig& config,
                                           unsigned threads = 1);

}  // namespace spatrisk
