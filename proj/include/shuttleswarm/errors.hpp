#pragma once

#include <stdexcept>
#include <string>

namespace shuttleswarm {

// Input documents (GeoJSON, config, sweep spec) that cannot be understood.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Valid syntax, impossible request (bad ranges, missing buildings, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Arguments outside an operation's domain (negative length, unknown node, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A state that the engine guarantees unreachable was reached; aborts the run.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace shuttleswarm
