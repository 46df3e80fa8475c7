#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace netloc {

/// Machine-readable failure categories. The CLI prints `kind_name()` in its
/// JSON error object, so the strings are part of the external interface.
enum class ErrorKind {
  InvalidSize,
  InvalidProbability,
  InvalidParams,
  InvalidGraph,
  InvalidInput,
  PreconditionViolation,
  ConvergenceFailure,
  NumericFailure,
  DimensionMismatch,
  StaleActivation,
  ParseError,
  VersionMismatch,
  CorruptFile,
  IoError,
};

std::string_view kind_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by iterative solvers that exhaust their iteration budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double residual, std::size_t iterations)
      : Error(ErrorKind::ConvergenceFailure, message),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  std::size_t iterations_;
};

}  // namespace netloc
