#pragma once

#include <stdexcept>
#include <string>

namespace ait {

/// Base of every error raised by the library. The CLI maps ValidationError to
/// exit code 1 and every other subclass to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input detected before any computation starts.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// numerics
class DomainError : public Error {
 public:
  using Error::Error;
};
class DivergenceError : public Error {
 public:
  using Error::Error;
};
class BracketError : public Error {
 public:
  using Error::Error;
};
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// machine / enumeration
class DomainViolation : public Error {
 public:
  using Error::Error;
};
class BudgetInsufficient : public Error {
 public:
  using Error::Error;
};
class FormatError : public Error {
 public:
  using Error::Error;
};
class MismatchError : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

// semimeasure constructions
class WeightError : public Error {
 public:
  using Error::Error;
};
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};
class BranchError : public Error {
 public:
  using Error::Error;
};
class RangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace ait
