#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nhcurv {

/// Broad failure classes. The CLI maps them onto exit statuses.
enum class ErrorKind {
  usage,       // bad invocation
  parse,       // malformed expression or system file
  validation,  // well-formed input that violates a structural requirement
  numerical,   // jet domain errors, singular matrices, insufficient order
  singular,    // evaluation at (or integration into) a singular locus
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(ErrorKind::parse, what + " at byte " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Error in a structured text document, reported with its line.
class FileParseError : public Error {
 public:
  FileParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(ErrorKind::parse, source + ":" + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::numerical, what) {}
};

class SingularPointError : public Error {
 public:
  explicit SingularPointError(const std::string& what)
      : Error(ErrorKind::singular, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::validation, what) {}
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what)
      : Error(ErrorKind::usage, what) {}
};

/// 2 for usage/parse/validation problems, 3 for numerical/singularity errors.
inline int exit_status(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage:
    case ErrorKind::parse:
    case ErrorKind::validation:
      return 2;
    case ErrorKind::numerical:
    case ErrorKind::singular:
      return 3;
  }
  return 3;
}

}  // namespace nhcurv
