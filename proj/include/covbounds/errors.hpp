#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace covbounds {

enum class ErrorCode {
  kEmptyInput,
  kDimensionMismatch,
  kNonSymmetric,
  kNotPsd,
  kDuplicateName,
  kNonFinite,
  kIndexOutOfRange,
  kNegativeVariance,
  kNotOnSimplex,
  kMeansNotCertain,
  kNonPositiveVariance,
  kBadBox,
  kTooManyScenarios,
  kInvalidArgument,
  kTooFewSamples,
  kRaggedRows,
  kParseError,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace covbounds
