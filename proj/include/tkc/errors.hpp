#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tkc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A query was issued against an artifact whose mode does not license it.
class ModeViolation : public Error {
 public:
  using Error::Error;
};

/// EQ/SE on artifacts that are not OBDD-backed, or mismatched orders.
class UnsupportedQuery : public Error {
 public:
  using Error::Error;
};

class TimeoutError : public Error {
 public:
  explicit TimeoutError(std::string phase)
      : Error("timeout during " + phase), phase_(std::move(phase)) {}
  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

/// The brute-force oracle refuses instances above its atom bound.
class OracleBoundExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace tkc
