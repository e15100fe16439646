#pragma once

#include <stdexcept>
#include <string>

namespace psog {

/// Invalid or inconsistent configuration values (named field in the message).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input text or bytes; message carries a line or byte position.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Geometric preconditions violated (occluded point, area off-frame, ...).
class GeometryError : public std::runtime_error {
public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

/// Regression failures (degenerate abscissae etc.).
class FitError : public std::runtime_error {
public:
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

/// Caller broke an API contract (mismatched lengths, missing baseline, ...).
class ContractError : public std::logic_error {
public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// Filesystem failures; message carries the path.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace psog
