#pragma once

#include <stdexcept>
#include <string>

namespace mixdet {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (shape, Hermiticity, zero
/// diagonal, contraction, index range, parameter range).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed the configured EnumerationBudget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A certified inequality failed to hold. These always hold mathematically, so
/// seeing one means an implementation bug or a numerically broken input.
class BoundViolation : public Error {
 public:
  using Error::Error;
};

/// A polynomial expected to be real-rooted was not.
class NotRealRooted : public Error {
 public:
  using Error::Error;
};

/// Iteration failed to converge, a linear system was singular, or a
/// residual check failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mixdet
