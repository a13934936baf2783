#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace spatrisk {

enum class CorrelationFamily { exponential, gaussian, spherical, cubic, matern };

inline constexpr std::array<CorrelationFamily, 5> kAllFamilies = {
    CorrelationFamily::exponential, CorrelationFamily::gaussian,
    CorrelationFamily::spherical, CorrelationFamily::cubic,
    CorrelationFamily::matern};

/// Isotropic auto-correlation model rho(h). theta is the correlation
/// length (same unit as distances); kappa is the Matern smoothness and is
/// ignored by the other families.
struct CorrelationModel {
  CorrelationFamily family = CorrelationFamily::exponential;
  double theta = 1.0;
  double kappa = 1.0;
};

/// rho(h) for h >= 0. Exactly 1 at h = 0 and exactly 0 beyond theta for
/// the compact-support families (spherical, cubic).
double eval(const CorrelationModel& model, double h);

/// True for families with rho(h) = 0 for all h >= theta.
bool has_compact_support(CorrelationFamily family);

std::string_view to_string(CorrelationFamily family);
std::optional<CorrelationFamily> parse_family(std::string_view name);

}  // namespace spatrisk
