#pragma once

#include <stdexcept>
#include <string>

namespace sljump {

// Base for every error raised by the library. Callers that only want to
// report a failure can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (x outside [0, pi], m > M, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A constructed object would violate one of its invariants. The message
// names the invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Step-size control could not meet the requested tolerance.
class ToleranceError : public Error {
 public:
  using Error::Error;
};

// |Im omega| * pi exceeds the configured exponent budget.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// Root iteration did not converge within its cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A probe point sits on (or numerically on) an eigenvalue / zero.
class BoundaryCollisionError : public Error {
 public:
  using Error::Error;
};

// Requested quantity lies outside the supported regime (bound states,
// |omega| < 1 in the asymptotic expansion, ...).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Zero counting found fewer located zeros than the winding number promised.
class CountMismatchError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace sljump
