#include "spatrisk/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace spatrisk {

namespace {

constexpr double kPi = 3.141592653589793238463;

void validate(const Region& region) {
  if (!(region.size > 0.0) || !std::isfinite(region.size))
    throw std::domain_error("region: size must be positive");
  if (!(region.lambda > 0.0) || !std::isfinite(region.lambda))
    throw std::domain_error("region: lambda must be positive");
}

double disk_density(double h, double r) {
  if (h >= 2.0 * r) return 0.0;
  const double ratio = h / (2.0 * r);
  const double root = std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
  return 2.0 * h / (r * r) * (2.0 / kPi * std::acos(ratio) - h / (kPi * r) * root);
}

double square_density(double h, double r) {
  if (h <= r) {
    const double r2 = r * r;
    return h / r2 * (2.0 * kPi - 8.0 * h / r + 2.0 * h * h / r2);
  }
  const double b = h * h / (r * r);
  if (b >= 2.0) return 0.0;
  const double root = std::sqrt(std::max(0.0, b - 1.0));
  return 2.0 * h / (r * r) * (4.0 * root - (b + 2.0 - kPi) - 4.0 * std::atan(root));
}

}  // namespace

double area(const Region& region) {
  validate(region);
  const double s = region.size * region.lambda;
  return region.shape == RegionShape::disk ? kPi * s * s : s * s;
}

double max_pair_distance(const Region& region) {
  validate(region);
  const double s = region.size * region.lambda;
  return region.shape == RegionShape::disk ? 2.0 * s : std::sqrt(2.0) * s;
}

double pair_distance_density(const Region& region, double h) {
  validate(region);
  if (!(h >= 0.0)) throw std::domain_error("pair_distance_density: h must be >= 0");
  const double base = region.shape == RegionShape::disk
                          ? disk_density(h / region.lambda, region.size)
                          : square_density(h / region.lambda, region.size);
  return base / region.lambda;
}

Point2 sample_uniform_point(const Region& region, Rng& rng) {
  validate(region);
  const double s = region.size * region.lambda;
  if (region.shape == RegionShape::square) {
    return {s * rng.uniform(), s * rng.uniform()};
  }
  const double r = s * std::sqrt(rng.uniform());
  const double angle = 2.0 * kPi * rng.uniform();
  return {r * std::cos(angle), r * std::sin(angle)};
}

double sample_pair_distance(const Region& region, Rng& rng) {
  const Point2 a = sample_uniform_point(region, rng);
  const Point2 b = sample_uniform_point(region, rng);
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::string_view to_string(RegionShape shape) {
  return shape == RegionShape::disk ? "disk" : "square";
}

std::optional<RegionShape> parse_shape(std::string_view name) {
  if (name == "disk") return RegionShape::disk;
  if (name == "square") return RegionShape::square;
  return std::nullopt;
}

}  // namespace spatrisk
