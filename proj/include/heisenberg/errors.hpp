#pragma once

#include <stdexcept>
#include <string>

namespace heisenberg {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The point lies outside the asymptotic regime an operation requires.
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quadrature could not reach the requested tolerance. Carries the best
// value found and its a-posteriori error estimate.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double best_value, double error_estimate)
      : std::runtime_error(what), best_value_(best_value), error_estimate_(error_estimate) {}

  double best_value() const noexcept { return best_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_value_;
  double error_estimate_;
};

}  // namespace heisenberg
