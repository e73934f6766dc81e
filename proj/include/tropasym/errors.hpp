#pragma once

#include <stdexcept>
#include <string>

namespace tropasym {

/// Malformed or out-of-contract input. The CLI maps it to exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result. Exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver gave up; carries the last measured residual.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// exp(kA) is not representable in the float oracle's precision (overflow or underflow to zero).
class FloatRangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace tropasym
