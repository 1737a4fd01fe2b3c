#include "qumark/error.hpp"

namespace qumark {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyMessage: return "EmptyMessage";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BasisNotDissimilar: return "BasisNotDissimilar";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BasisMismatch: return "BasisMismatch";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::InvalidSecret: return "InvalidSecret";
    case ErrorCode::InvalidKey: return "InvalidKey";
    case ErrorCode::TooFewEligiblePositions: return "TooFewEligiblePositions";
    case ErrorCode::CountExceedsTotal: return "CountExceedsTotal";
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::RatesEqual: return "RatesEqual";
    case ErrorCode::Unachievable: return "Unachievable";
    case ErrorCode::SampleTooSmall: return "SampleTooSmall";
    case ErrorCode::TooFewCopies: return "TooFewCopies";
    case ErrorCode::OffsetTooLarge: return "OffsetTooLarge";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::UnsupportedMaxval: return "UnsupportedMaxval";
    case ErrorCode::TruncatedPixelData: return "TruncatedPixelData";
    case ErrorCode::MissingMeta: return "MissingMeta";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code) {}

}  // namespace qumark
