#pragma once

#include <stdexcept>

namespace spindyn {

// Bad user configuration: config files, CLI parameter blocks, unknown keys.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally invalid data or a violated precondition: malformed instance
// files, mismatched lengths, out-of-range parameters.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failures.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace spindyn
