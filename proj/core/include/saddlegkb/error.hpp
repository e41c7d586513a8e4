#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace saddlegkb {

enum class ErrorCode {
  DimensionMismatch,
  NonFinite,
  InvalidMatrix,
  NotPositiveDefinite,
  IndefiniteNorm,
  EmptyMatrix,
  PatternMismatch,
  NonpositiveEta,
  InvalidConfig,
  InvalidSingularValueBound,
  SingularSystem,
  TooLargeForDense,
  InvalidGrid,
  InvalidSpec,
  ParseError,
  UnsupportedField,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this type (or a subclass);
// code() identifies the failure class for callers that branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when a Cholesky pivot drops below the positivity threshold.
// pivot_index() is in the numbering of the original (unpermuted) matrix.
class NotPositiveDefiniteError : public Error {
 public:
  NotPositiveDefiniteError(std::size_t pivot_index, double pivot_value);

  std::size_t pivot_index() const noexcept { return pivot_index_; }
  double pivot_value() const noexcept { return pivot_value_; }

 private:
  std::size_t pivot_index_;
  double pivot_value_;
};

// Raised by the Matrix Market / config readers; line() is 1-based, 0 when
// the failure is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason, const std::string& source = {});

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

}  // namespace saddlegkb
