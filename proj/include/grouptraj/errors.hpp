#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grouptraj {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class TooFewPointsError : public Error {
 public:
  using Error::Error;
};

class InsufficientHistoryError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

class DegeneratePointError : public Error {
 public:
  using Error::Error;
};

class EmptyCoPresenceError : public Error {
 public:
  using Error::Error;
};

class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

class MemberCountMismatchError : public Error {
 public:
  using Error::Error;
};

/// Input data is well-formed but semantically unusable (duplicate frames, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace grouptraj
