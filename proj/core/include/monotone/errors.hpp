#pragma once

#include <stdexcept>
#include <string>

namespace monotone {

/// Argument outside the mathematical domain of an operation (e.g. u outside (0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operands live on different state spaces or have mismatched dimensions.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A kernel, distribution or spec violates one of its construction invariants.
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Coupled birth-death rates are not ordered as the coupling requires.
class OrderingError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// A grid cannot hold the model without losing more mass than allowed.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear solve failed to reach the requested residual.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace monotone
