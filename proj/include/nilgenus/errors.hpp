#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nilgenus {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A letter refers to a generator outside its alphabet, or two words over
/// different alphabets were combined.
class AlphabetError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A declared map on generators does not send some relator to the identity.
class NotAHomomorphism : public Error {
 public:
  NotAHomomorphism(std::size_t relator, const std::string& what)
      : Error(what), relator_(relator) {}
  std::size_t relator_index() const noexcept { return relator_; }

 private:
  std::size_t relator_;
};

/// A configured resource limit (Hirsch length, time, coset count, index)
/// was hit. Raised instead of returning a truncated answer.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Precondition violations on arguments (bad prime, rank mismatch, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace nilgenus
