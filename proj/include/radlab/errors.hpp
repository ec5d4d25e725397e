#pragma once

#include <stdexcept>
#include <string>

namespace radlab {

// Argument outside the mathematical domain of an operation (poles, s >= n, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure did not reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureFailure : public NumericError {
 public:
  QuadratureFailure(const std::string& what, double partial, double error)
      : NumericError(what), partial_(partial), error_(error) {}
  double partial_estimate() const noexcept { return partial_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double partial_;
  double error_;
};

// Operation invoked before a required setup step (e.g. uncalibrated scheme).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Caller broke a documented precondition that has a dedicated checker.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Structured input is missing a field or has one of the wrong shape.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace radlab
