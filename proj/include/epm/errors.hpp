#pragma once

#include <stdexcept>
#include <string>

namespace epm {

// Violations of physical preconditions/contracts (type-I input, under-resolved
// grid, non-normalized amplitude, ...).  The CLI maps these to exit code 2.
class physics_error : public std::runtime_error {
public:
  explicit physics_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Configuration / input-file problems.  The CLI maps these to exit code 1.
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace epm
