#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mlkit {

// Malformed or inconsistent caller input (exit code 2 at the CLI).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structurally valid object that violates a mathematical precondition,
// e.g. a singular curve or a dependent generator list.
class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

// Syntax errors carry a 1-based source position.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(what + " at line " + std::to_string(line) + ", column " +
                   std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A finite enumeration would exceed the configured size ceiling (exit code 3).
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, double attempted)
      : std::runtime_error(what), attempted_(attempted) {}

  double attempted() const { return attempted_; }

 private:
  double attempted_;
};

}  // namespace mlkit
