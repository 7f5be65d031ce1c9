#pragma once

#include <stdexcept>
#include <string>

namespace extinctlab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on caller-supplied data was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A function was evaluated outside the set where it is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A map that has to be strictly monotone (for inversion) is not.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

/// Floating-point breakdown: NaN, singular system, failed iteration.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Bisection or bracketing could not find a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// The run configuration could not be read or is inconsistent.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

}  // namespace extinctlab
