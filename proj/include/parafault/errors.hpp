#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parafault {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Non-finite or otherwise unusable numeric input.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inconsistent or invalid configuration (profiles, filters, scenarios).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Telemetry stream violates sampling assumptions; carries the 0-based sample index.
class StreamError : public std::runtime_error {
public:
  StreamError(std::size_t index, const std::string& what)
      : std::runtime_error("sample " + std::to_string(index) + ": " + what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

private:
  std::size_t index_;
};

}  // namespace parafault
