#ifndef STABLEPRED_ERRORS_HPP
#define STABLEPRED_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace stablepred {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// restrict() called with an empty restriction set.
struct EmptyRestrictionError : Error {
  EmptyRestrictionError() : Error("restriction set is empty") {}
};

// An exact enumeration would exceed its feasibility guard. Where a cheap
// upper bound is known (Sauer-Shelah), it is carried along.
struct TooLargeError : Error {
  explicit TooLargeError(const std::string& what, double upper_bound = -1.0)
      : Error(what), bound(upper_bound) {}
  double bound;
};

struct BadDistributionError : Error {
  using Error::Error;
};

struct EmptyClassError : Error {
  EmptyClassError() : Error("hypothesis/dichotomy set is empty") {}
};

// A partition scheme does not fit in the available sample. The message names
// the violated sample-size condition.
struct InsufficientSampleError : Error {
  using Error::Error;
};

// Malformed configuration or input file (CLI layer).
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace stablepred

#endif
