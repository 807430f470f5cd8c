#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gcert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& where, std::size_t expected, std::size_t got)
      : Error(where + ": dimension mismatch (expected " + std::to_string(expected) + ", got " +
              std::to_string(got) + ")") {}
};

/// A denominator evaluated to (numerically) zero.
class DenominatorVanishes : public Error {
 public:
  DenominatorVanishes(std::vector<double> x, double value)
      : Error("denominator vanishes (value " + std::to_string(value) + ")"),
        point(std::move(x)),
        denominator(value) {}
  std::vector<double> point;
  double denominator;
};

/// A denominator changes sign (or vanishes) somewhere on the discrete/continuous box.
class SignIndefiniteDenominator : public Error {
 public:
  SignIndefiniteDenominator(std::size_t index, std::vector<double> x, const std::string& why)
      : Error("denominator " + std::to_string(index) + " is not sign-definite over the box: " + why),
        function_index(index),
        witness(std::move(x)) {}
  std::size_t function_index;
  std::vector<double> witness;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class WrongKind : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation is invoked outside its contract (e.g. a certificate at a non-KKT pair).
class ContractError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::string field_path, std::size_t line_no = 0)
      : Error(line_no ? "line " + std::to_string(line_no) + ": " + msg
                      : (field_path.empty() ? msg : field_path + ": " + msg)),
        field(std::move(field_path)),
        line(line_no) {}
  std::string field;
  std::size_t line;
};

}  // namespace gcert
