#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hurst_sde {

/// Invalid argument or violated precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure while integrating a model (non-finite state).
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " (grid index " + std::to_string(index) + ")"), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// |g(X)| fell below the degeneracy guard, so the model violates the
/// bounded-1/g assumption on the observed path.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " (grid index " + std::to_string(index) + ")"), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Observations that cannot be estimated from (zero window energy, malformed files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Estimator rate is degenerate, ln(n/T) <= 1.
class RateDegeneracyError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Failure inside a numerical kernel that should not happen for valid input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace hurst_sde
