#pragma once

#include <stdexcept>
#include <string>

namespace escat {

// Bad user input: malformed config files, out-of-range parameters, unknown keys.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure while running: NaN fields, non-quiet trajectory ends, etc.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace escat
