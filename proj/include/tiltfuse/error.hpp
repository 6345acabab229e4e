#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tiltfuse {

// Exit codes used by the command-line front end. Each exception family maps
// to exactly one of them.
enum class ErrorClass : int {
  Usage = 2,
  Parse = 3,
  Numeric = 4,
  Optimization = 5,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ErrorClass error_class() const noexcept = 0;
};

class UsageError : public Error {
 public:
  using Error::Error;
  ErrorClass error_class() const noexcept override { return ErrorClass::Usage; }
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::string column = {})
      : Error(format(what, line, column)), line_(line), column_(std::move(column)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& column() const noexcept { return column_; }
  ErrorClass error_class() const noexcept override { return ErrorClass::Parse; }

 private:
  static std::string format(const std::string& what, std::size_t line, const std::string& column) {
    std::string msg = "line " + std::to_string(line);
    if (!column.empty()) msg += ", column " + column;
    return msg + ": " + what;
  }

  std::size_t line_;
  std::string column_;
};

// Timestamps that do not strictly increase.
class OrderingError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Everything numeric or contract related: invalid states, bad parameters,
// singular updates, degenerate geometry. Exit code 4.
class NumericError : public Error {
 public:
  using Error::Error;
  ErrorClass error_class() const noexcept override { return ErrorClass::Numeric; }
};

class InvalidStateError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ParameterError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConfigError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateTiltError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularInnovationError : public NumericError {
 public:
  using NumericError::NumericError;
};

class InitializationError : public NumericError {
 public:
  using NumericError::NumericError;
};

class FittingError : public NumericError {
 public:
  using NumericError::NumericError;
};

class SimulationError : public NumericError {
 public:
  SimulationError(const std::string& what, std::size_t sample)
      : NumericError("sample " + std::to_string(sample) + ": " + what), sample_(sample) {}
  std::size_t sample() const noexcept { return sample_; }

 private:
  std::size_t sample_;
};

// A per-sample failure while running a filter over a stream.
class StepError : public NumericError {
 public:
  StepError(const std::string& what, std::size_t sample)
      : NumericError("sample " + std::to_string(sample) + ": " + what), sample_(sample) {}
  std::size_t sample() const noexcept { return sample_; }

 private:
  std::size_t sample_;
};

class OptimizationError : public Error {
 public:
  using Error::Error;
  ErrorClass error_class() const noexcept override { return ErrorClass::Optimization; }
};

}  // namespace tiltfuse
