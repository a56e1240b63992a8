#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace delplan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position` is a 0-based byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Ill-formed model, scenario file, or operation argument.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A configurable resource cap (states, worlds, depth) was hit.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace delplan
