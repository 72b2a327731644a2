#pragma once

#include <stdexcept>
#include <string>

namespace rde {

// Base class for every rejection of caller-supplied data. The CLI maps
// these to exit code 1; anything else escaping to main is an internal
// error (exit code 3).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rde
