#ifndef EFFDOF_ERRORS_HPP
#define EFFDOF_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace effdof {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates a documented type invariant (negative weight, dof <= 0, K < 2, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Two sequences that must be paired have different lengths.
class LengthMismatch : public ValidationError {
 public:
  LengthMismatch(std::size_t expected, std::size_t actual)
      : ValidationError("length mismatch: expected " + std::to_string(expected) + " values, got " +
                        std::to_string(actual)) {}
};

/// The estimator is undefined for this input (all weighted variances vanish, constant
/// pseudo-values, a non-positive corrected df).
class DegenerateComponents : public Error {
 public:
  using Error::Error;
};

/// Every weight is zero, so no weighted summary exists.
class AllZeroWeights : public DegenerateComponents {
 public:
  AllZeroWeights() : DegenerateComponents("all weights are zero") {}
};

/// A floating-point result fell outside its rounding envelope.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Line and column are 1-based; column 0 means "whole line".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace effdof

#endif  // EFFDOF_ERRORS_HPP
