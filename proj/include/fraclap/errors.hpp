#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Gamma evaluated at (or within tolerance of) a non-positive integer.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Order s too close to an integer for the non-integer closed forms.
class NearIntegerOrderError : public DomainError {
 public:
  using DomainError::DomainError;
};

class DegenerateInputError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Certified truncation error exceeds the caller's budget.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

/// Sequence support does not fit the simulation window.
class SupportOverflowError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Explicit time step above the stability bound.
class StabilityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace fraclap
