#pragma once

#include <stdexcept>

namespace rgather {

// Base of all library failures. The CLI maps subclasses to exit codes:
// InvalidInput -> 2, Infeasible -> 1.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed arguments, files, or solution structures.
struct InvalidInput : Error {
  using Error::Error;
};

// No clustering satisfying the requested constraints exists, or none was
// found within the probed scale range.
struct Infeasible : Error {
  using Error::Error;
};

}  // namespace rgather
