#pragma once

#include <stdexcept>
#include <string>

namespace bcfdim {

/// A partition or tail sum was requested at or below its convergence threshold.
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An exact enumeration would exceed the configured word budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The subsystem has no hyperbolic generator (for instance the BCF alphabet {2}).
class DegenerateSystem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bcfdim
