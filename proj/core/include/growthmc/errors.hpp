#pragma once

#include <stdexcept>
#include <string>

namespace growthmc {

// Bad or inconsistent user input: config documents, CLI arguments,
// malformed CSV, invalid run parameters.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Tail fit rejected: fewer than the required usable points.
class InsufficientPointsError : public ConfigError {
 public:
  explicit InsufficientPointsError(const std::string& what)
      : ConfigError(what) {}
};

// Truncated-kernel state cap too small for the requested accuracy.
class CapError : public std::runtime_error {
 public:
  explicit CapError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace growthmc
