#pragma once

#include <stdexcept>
#include <string>

namespace cangrow {

/// Base of every error raised by the library. The CLI maps the concrete
/// subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// The quotient is not zero-dimensional. Positive-dimensional Cohen-Macaulay
/// rings must be cut down by a maximal regular sequence first; the Betti
/// numbers of the canonical module do not change under that reduction.
class NotArtinian : public Error {
 public:
  using Error::Error;
};

class UnitInIdeal : public Error {
 public:
  using Error::Error;
};

/// A configured size or work budget would be exceeded.
class SizeCap : public Error {
 public:
  using Error::Error;
};

class ZeroModule : public Error {
 public:
  using Error::Error;
};

class CacheCorrupt : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace cangrow
