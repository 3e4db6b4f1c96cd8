#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace srnn {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Matrix or vector shapes do not line up.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Invalid option or parameter combination (non-positive calibration, window/delay mismatch, ...).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Malformed runtime input (empty sentence, negative activation, ...).
class InputError : public Error {
public:
  using Error::Error;
};

/// Numeric argument outside its admissible range.
class RangeError : public Error {
public:
  using Error::Error;
};

/// A quantizer precondition was violated; carries the offending index.
class PreconditionError : public Error {
public:
  PreconditionError(const std::string& what, std::size_t row, std::size_t col)
      : Error(what), row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

private:
  std::size_t row_;
  std::size_t col_;
};

/// Text file could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Training produced a non-finite loss.
class TrainingDiverged : public Error {
public:
  using Error::Error;
};

}  // namespace srnn
