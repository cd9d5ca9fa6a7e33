#pragma once

#include <stdexcept>
#include <string>

namespace cubica {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands of incompatible shape, field or ambient dimension.
class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// A configured enumeration cap or growth budget would be exceeded.
/// Signals that the instance is too large, not that the math failed.
class CapExceeded : public Error {
public:
  using Error::Error;
};

/// A map that was required to preserve the cubic form does not.
class NotIsocubic : public Error {
public:
  using Error::Error;
};

/// Malformed input (bad JSON, invalid modulus, broken invariants).
class InvalidInput : public Error {
public:
  using Error::Error;
};

} // namespace cubica
