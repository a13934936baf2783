#pragma once

#include <optional>
#include <string_view>

#include "spatrisk/rng.hpp"

namespace spatrisk {

enum class RegionShape { disk, square };

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// A disk of radius `size` or an axis-aligned square of side `size`,
/// optionally scaled by the homothety factor `lambda`.
struct Region {
  RegionShape shape = RegionShape::square;
  double size = 1.0;
  double lambda = 1.0;
};

double area(const Region& region);

/// Largest distance between two points of the region: 2R lambda for disks,
/// sqrt(2) R lambda for squares.
double max_pair_distance(const Region& region);

/// Density of ||S - T|| for S, T independent and uniform on the region
/// (the line-picking density). Zero outside [0, max_pair_distance].
/// Scaling identity used verbatim: f(h; lambda R) = f(h/lambda; R)/lambda.
double pair_distance_density(const Region& region, double h);

/// Uniform point on the region (squares anchored at the origin corner,
/// disks centered at the origin).
Point2 sample_uniform_point(const Region& region, Rng& rng);

/// ||S - T|| for an independent uniform pair.
double sample_pair_distance(const Region& region, Rng& rng);

std::string_view to_string(RegionShape shape);
std::optional<RegionShape> parse_shape(std::string_view name);

}  // namespace spatrisk
