#pragma once

#include <stdexcept>
#include <string>

namespace ghostspec {

// Error classes map onto the CLI exit codes: ConfigError -> 2, IoError -> 3,
// AnalysisError -> 4. Anything else that escapes is a plain failure (1).

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct AnalysisError : std::runtime_error {
  explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ghostspec
