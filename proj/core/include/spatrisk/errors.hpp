#pragma once

#include <stdexcept>

namespace spatrisk {

/// A computation could not reach the requested accuracy or state
/// (quadrature non-convergence, covariance factorization failure, ...).
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request exceeds a configured resource guard (e.g. grid size limits
/// protecting against cubic-cost factorizations).
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spatrisk
