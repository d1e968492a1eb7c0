#pragma once

#include <stdexcept>
#include <string>

namespace qlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in different coefficient rings.
class RingMismatch : public Error {
 public:
  using Error::Error;
};

/// An element that had to be invertible was not.
class NonUnit : public Error {
 public:
  using Error::Error;
};

/// A rational with denominator divisible by the localizing prime.
class NotLocalized : public Error {
 public:
  using Error::Error;
};

/// Division that was required to be exact left a remainder.
class InexactDivision : public Error {
 public:
  using Error::Error;
};

/// A coefficient was requested beyond the known precision of a series.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// A Laurent principal part grew beyond the configured cap.
class PoleCapExceeded : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of an operation (bad prime, bad
/// character pair, non-Frobenius-compatible series, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Two constructions of a theorem-level identity disagree.
class IdentityMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace qlab
