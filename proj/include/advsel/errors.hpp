#pragma once

#include <stdexcept>
#include <string>

namespace advsel {

// Thrown when an exhaustive enumeration would exceed its configured budget.
// Oracles never silently truncate a search space.
class GuardExceeded : public std::runtime_error {
  public:
    explicit GuardExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for file system and parse failures on external inputs.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace advsel
