#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flatf {

/// Base class of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: expression syntax, schema violations, bad arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(std::size_t position, const std::string& message)
      : InputError("parse error at position " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An element that must be charge-homogeneous is not.
class ChargeError : public InputError {
 public:
  using InputError::InputError;
};

/// The computation cannot proceed with the data given (basis does not span,
/// enumeration incomplete, level out of range, ...).
class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace flatf
