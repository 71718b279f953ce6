#pragma once

#include <stdexcept>
#include <string>

namespace hoi {

// Malformed or inconsistent input data (files, records, indices).
// CLI maps this to exit code 1.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration (bad thresholds, empty anchor levels, unknown keys).
// CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hoi
