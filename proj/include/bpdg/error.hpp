#pragma once

#include <stdexcept>
#include <string>

namespace bpdg {

// Bad user input: config values, mesh sizes, unsupported rule orders.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (negative p, |mu| = 1 ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A time step could not be completed (negative cell average, non-finite RHS).
struct StepFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Periodic Poisson data with nonzero net charge.
struct CompatibilityError : std::runtime_error {
  CompatibilityError(const std::string& what, double imbalance)
      : std::runtime_error(what), imbalance(imbalance) {}
  double imbalance;
};

}  // namespace bpdg
