#pragma once

#include <stdexcept>
#include <string>

namespace macc {

/// Invalid run configuration: bad parameters, divisibility violations,
/// refused modes, exceeded enumeration budgets, malformed input files.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace macc
