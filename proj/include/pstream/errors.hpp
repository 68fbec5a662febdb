#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace pstream {

/// Coarse failure class; the CLI maps each one to a process exit code.
enum class ErrorCategory { config, data, numerical };

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, const std::string &what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

private:
  ErrorCategory category_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  explicit DomainError(const std::string &what) : Error(ErrorCategory::numerical, what) {}
};

/// Configuration rejected (bad value, unknown key, model regime violated).
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string &what) : Error(ErrorCategory::config, what) {}
};

/// Input violates a documented precondition (unsorted events, overlapping pulses).
class ContractError : public Error {
public:
  explicit ContractError(const std::string &what) : Error(ErrorCategory::data, what) {}
};

class ParseError : public Error {
public:
  ParseError(const std::string &what, std::size_t byte_offset)
      : Error(ErrorCategory::data, what + " (at byte " + std::to_string(byte_offset) + ")"),
        offset_(byte_offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class IoError : public Error {
public:
  explicit IoError(const std::string &what) : Error(ErrorCategory::data, what) {}
};

class InsufficientDataError : public Error {
public:
  explicit InsufficientDataError(const std::string &what) : Error(ErrorCategory::data, what) {}
};

class AlignmentError : public Error {
public:
  explicit AlignmentError(const std::string &what) : Error(ErrorCategory::data, what) {}
};

/// A ratio whose denominator vanished (zero singles, zero fringe maximum).
class UndefinedRatioError : public Error {
public:
  explicit UndefinedRatioError(const std::string &what) : Error(ErrorCategory::numerical, what) {}
};

class NoPeriodError : public Error {
public:
  explicit NoPeriodError(const std::string &what) : Error(ErrorCategory::numerical, what) {}
};

/// Goodness-of-fit test with fewer than two usable cells.
class DegenerateError : public Error {
public:
  explicit DegenerateError(const std::string &what) : Error(ErrorCategory::numerical, what) {}
};

inline int exit_code(ErrorCategory c) {
  switch (c) {
  case ErrorCategory::config:
    return 2;
  case ErrorCategory::data:
    return 3;
  case ErrorCategory::numerical:
    return 4;
  }
  return 1;
}

} // namespace pstream
