#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace modeldelta {

/// Broad failure classes. The CLI maps each one to a single exit status.
enum class ErrorKind {
  parse,       ///< malformed input text (.nt3, .ntc, XML, query syntax)
  usage,       ///< caller asked for something invalid (labels, flags, roles)
  validation,  ///< well-formed input that violates a model rule
  integrity,   ///< structural invariant broken inside a model (tree shape)
  io,          ///< file system failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure with a 1-based source location (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column = 0)
      : Error(ErrorKind::parse, format(message, line, column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line,
                            std::size_t column) {
    if (line == 0) return message;
    std::string where = "line " + std::to_string(line);
    if (column != 0) where += ", column " + std::to_string(column);
    return where + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message) : Error(ErrorKind::usage, message) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorKind::validation, message) {}
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& message)
      : Error(ErrorKind::integrity, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorKind::io, message) {}
};

}  // namespace modeldelta
