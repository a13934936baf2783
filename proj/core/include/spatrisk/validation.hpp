#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace spatrisk::validation {

/// Independent quadrature oracle for the closed-form bivariate normal
/// quantities: integrates x^px y^py times the bivariate density over
/// [u, inf) x [v, inf) with an iterated adaptive Simpson rule. Deliberately
/// shares no code with the closed forms it cross-checks.
double orthant_moment_oracle(double u, double v, double w, int px, int py,
                             double tol = 1e-11);

/// One-sample Kolmogorov-Smirnov statistic; samples need not be sorted.
double ks_statistic(std::vector<double> samples,
                    const std::function<double(double)>& cdf);

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct ValidateOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Test hook: corrupts one tolerance so the suite must report a failure.
  bool inject_failure = false;
};

/// The cross-module oracle suite behind the `validate` command: density
/// normalization, closed forms vs the quadrature oracle, M1 vs the
/// one-dimensional integration, sub-additivity, anti-monotonicity, and a
/// repeat-run determinism check. Output is bytewise deterministic for a
/// fixed seed, independent of the thread count.
std::vector<CheckResult> run_all(const ValidateOptions& options);

std::string format_report(const std::vector<CheckResult>& checks,
                          std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace spatrisk::validation
