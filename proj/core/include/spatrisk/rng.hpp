#pragma once

#include <cstdint>
#include <random>

#include "spatrisk/special_functions.hpp"

namespace spatrisk {

namespace detail {
// splitmix64 finalizer; used to scramble seeds and derive substreams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic random stream with counter-derived substreams. Normal
/// deviates go through the library quantile so the byte-for-byte output is
/// independent of the platform's std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(detail::mix64(seed)) {}

  /// Independent stream identified by (this stream's seed, index).
  /// Derivations can be chained (run -> replicate -> ...).
  Rng substream(std::uint64_t index) const {
    return Rng(detail::mix64(seed_ ^ (0x9e3779b97f4a7c15ull * (index + 1))));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via inverse-cdf sampling.
  double normal() { return norm_quantile(uniform()); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace spatrisk
