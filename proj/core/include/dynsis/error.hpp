#pragma once

#include <stdexcept>
#include <string>

namespace dynsis {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed (singular matrix, no convergence, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The adaptive integrator could not make progress.
class IntegrationError : public NumericalError {
 public:
  IntegrationError(const std::string& what, double failure_time)
      : NumericalError(what), failure_time_(failure_time) {}

  double failure_time() const noexcept { return failure_time_; }

 private:
  double failure_time_;
};

/// Random graph construction did not produce a valid graph.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dynsis
