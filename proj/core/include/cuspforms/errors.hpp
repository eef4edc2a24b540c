#pragma once

// Error taxonomy shared by every module.  All conditions that a caller could
// reasonably recover from are typed; anything else is a plain Error.

#include <stdexcept>
#include <string>

namespace cuspforms {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A series was asked to converge outside its disc (e.g. exp on a matrix of
// valuation < 1, or the exponential chart at p = 2).
struct ConvergenceViolation : Error {
  using Error::Error;
};

// The requested answer is not determined by the digits we actually hold.
struct PrecisionError : Error {
  using Error::Error;
};

// An input lies outside the operation's domain (support not contained in the
// chart domain, non-integral matrix where an integral one is required, ...).
struct DomainViolation : Error {
  using Error::Error;
};

// A verdict would require more working digits than the context provides.
// Never downgraded to a silent pass.
struct InsufficientPrecision : Error {
  using Error::Error;
};

// A verification sweep found a nonzero value where exact zero was required.
// Verifiers normally report violations as data; this is thrown by the
// require_pass() helpers when a caller wants failure to be fatal.
struct CuspViolation : Error {
  using Error::Error;
};

// Group-side and Lie-side evaluations of the same integral disagreed.
struct ReductionMismatch : Error {
  using Error::Error;
};

// A pipeline configuration failed validation before any computation ran.
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace cuspforms
