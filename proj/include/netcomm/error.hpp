#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netcomm {

// Root of the library's exception hierarchy. The CLI maps subclasses onto
// process exit codes (input problems -> 2, algorithm preconditions -> 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or row. `line` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a contract (bad weight, duplicate id, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// Statistic is not defined for this input (e.g. connectedness with n < 2).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

// Degree-exponent fit impossible (fewer than two distinct degrees).
class NoFitError : public UndefinedError {
 public:
  using UndefinedError::UndefinedError;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// Algorithm requires a connected graph.
class ConnectivityError : public Error {
 public:
  using Error::Error;
};

// No non-null observations to tabulate.
class EmptyTableError : public InputError {
 public:
  using InputError::InputError;
};

// Contingency table too small for a chi-squared statistic.
class ShapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace netcomm
