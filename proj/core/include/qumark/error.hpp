#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qumark {

enum class ErrorCode {
  EmptyMessage,
  IndexOutOfRange,
  BasisNotDissimilar,
  LengthMismatch,
  BasisMismatch,
  InvalidProbability,
  InvalidSecret,
  InvalidKey,
  TooFewEligiblePositions,
  CountExceedsTotal,
  ZeroTotal,
  RatesEqual,
  Unachievable,
  SampleTooSmall,
  TooFewCopies,
  OffsetTooLarge,
  EmptyInput,
  MalformedHeader,
  UnsupportedMaxval,
  TruncatedPixelData,
  MissingMeta,
  MalformedFile,
  VersionMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every precondition failure in the library surfaces as this exception; the
// code lets callers (and the CLI) distinguish failure classes without
// parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qumark
