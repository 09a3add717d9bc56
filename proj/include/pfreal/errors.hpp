#pragma once

#include <stdexcept>
#include <string>

namespace pfreal {

// Caller supplied something malformed: bad dimensions, missing slack bus, bad JSON.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A structural claim about the solution set did not hold (unmatched symmetry
// partner, eliminant count disagreeing with direct count, ...). Usually means a
// path was lost or mis-tracked.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sign decision could not be made at the working precision.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pfreal
