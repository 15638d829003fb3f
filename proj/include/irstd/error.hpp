#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace irstd {

enum class ErrorCode {
  DimensionMismatch,
  ImaginaryResidueTooLarge,
  RankOutOfRange,
  NonFinite,
  TooFewFrames,
  AlignmentMismatch,
  BadMagic,
  TruncatedPayload,
  UnsupportedMaxval,
  InvalidSpec,
  UnsortedInput,
  LengthMismatch,
  IoFailure,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ImaginaryResidueTooLarge: return "ImaginaryResidueTooLarge";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::TooFewFrames: return "TooFewFrames";
    case ErrorCode::AlignmentMismatch: return "AlignmentMismatch";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UnsortedInput: return "UnsortedInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code; what() is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace irstd
