#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace satlab {

/// Operands with incompatible dimensions (e.g. assignments over different n).
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An argument outside the documented domain of an operation.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Requested exact enumeration exceeds the configured bounds.
struct EnumerationLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An operation that requires a satisfiable formula was given an unsatisfiable one.
struct UnsatisfiableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rejection sampling gave up after the configured number of tries.
struct ExhaustedError : std::runtime_error {
  std::uint64_t tries;
  explicit ExhaustedError(std::uint64_t t)
      : std::runtime_error("rejection sampling exhausted after " + std::to_string(t) + " tries"),
        tries(t) {}
};

/// Root finder could not bracket a sign change.
struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace satlab
