#pragma once

#include <stdexcept>
#include <string>

namespace mallows {

// Brute-force size cap exceeded; the CLI maps this to its own exit code.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Pattern outside the class an operation supports.
struct UnsupportedPattern : std::invalid_argument {
  explicit UnsupportedPattern(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace mallows
