#pragma once

#include <stdexcept>
#include <string>

namespace orbchi {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A constructed group or induced set would exceed the configured order cap.
class CapExceededError : public Error {
public:
  using Error::Error;
};

/// An enumeration exceeded its node budget. No partial results are returned.
class BudgetExceededError : public Error {
public:
  using Error::Error;
};

/// A precondition on the arguments does not hold (non-normal subgroup,
/// non-injective embedding, malformed action table, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// The requested operation is outside the supported range.
class UnsupportedError : public Error {
public:
  using Error::Error;
};

/// Text or file input could not be parsed.
class ParseError : public Error {
public:
  using Error::Error;
};

/// A linear system had no solution (signals corrupted input values).
class NoSolutionError : public Error {
public:
  using Error::Error;
};

/// A value that must be an integer came out fractional.
class IntegralityError : public Error {
public:
  using Error::Error;
};

}  // namespace orbchi
