#pragma once

#include <stdexcept>
#include <string>

namespace tfswap {

// Input outside the mathematical or physical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Inconsistent or unusable configuration (grids, bins, budgets).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical routine failed or violated one of its own checks.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace tfswap
