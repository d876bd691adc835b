#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cevem {

enum class ErrorCode {
  NonPositiveSigma,
  ExponentOutOfRange,
  NonPositiveInitialValue,
  NonFiniteParameter,
  InvalidGrid,
  ExponentNotHalf,
  NonFiniteState,
  NoiseLengthMismatch,
  MismatchedPaths,
  InvalidSchedule,
  InvalidTruncationLevel,
  EmptySample,
  InvalidArgument,
  ConfigError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::NonPositiveInitialValue: return "NonPositiveInitialValue";
    case ErrorCode::NonFiniteParameter: return "NonFiniteParameter";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::ExponentNotHalf: return "ExponentNotHalf";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::NoiseLengthMismatch: return "NoiseLengthMismatch";
    case ErrorCode::MismatchedPaths: return "MismatchedPaths";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::InvalidTruncationLevel: return "InvalidTruncationLevel";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

// All library failures are reported through this type; code() names the
// violated constraint, what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cevem
