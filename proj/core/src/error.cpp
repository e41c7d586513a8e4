#include "saddlegkb/error.hpp"

#include <sstream>

namespace saddlegkb {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::IndefiniteNorm: return "IndefiniteNorm";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::PatternMismatch: return "PatternMismatch";
    case ErrorCode::NonpositiveEta: return "NonpositiveEta";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidSingularValueBound: return "InvalidSingularValueBound";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::TooLargeForDense: return "TooLargeForDense";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {

std::string pivot_message(std::size_t index, double value) {
  std::ostringstream os;
  os << "pivot " << index << " is " << value << " (matrix is not positive definite)";
  return os.str();
}

std::string line_message(std::size_t line, const std::string& reason, const std::string& source) {
  if (!source.empty()) {
    return line == 0 ? source + ": " + reason : source + ":" + std::to_string(line) + ": " + reason;
  }
  if (line == 0) return reason;
  return "line " + std::to_string(line) + ": " + reason;
}

}  // namespace

NotPositiveDefiniteError::NotPositiveDefiniteError(std::size_t pivot_index, double pivot_value)
    : Error(ErrorCode::NotPositiveDefinite, pivot_message(pivot_index, pivot_value)),
      pivot_index_(pivot_index),
      pivot_value_(pivot_value) {}

ParseError::ParseError(std::size_t line, const std::string& reason, const std::string& source)
    : Error(ErrorCode::ParseError, line_message(line, reason, source)), line_(line), reason_(reason) {}

}  // namespace saddlegkb
