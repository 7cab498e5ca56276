#pragma once

#include <stdexcept>
#include <string>

namespace etma {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed document. `where()` is a JSON-pointer-like path into the input.
class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& msg)
      : Error(where.empty() ? msg : where + ": " + msg), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// A name (component, state, event, path index) that does not resolve.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Reduction directives whose effects overlap.
class ConflictError : public Error {
 public:
  using Error::Error;
};

/// Well-formed request the engine does not support (e.g. redundancy of a
/// component with more than two states).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Input rejected against a value constraint (probability table, index range).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Enumeration would exceed the configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace etma
