#pragma once

#include <stdexcept>

namespace qgrem {

/// Input violates a type invariant (non-monotone values, bad probabilities, ...).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Problem too large for an exhaustive or dense path.
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};

}  // namespace qgrem
