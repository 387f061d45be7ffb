#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csram {

enum class ErrorCode {
  kInvalidOpcode,
  kParseError,
  kUnknownMnemonic,
  kOperandOutOfRange,
  kRowOutOfRange,
  kColumnOutOfRange,
  kPendingActivation,
  kBlockWidthMismatch,
  kCapacityExceeded,
  kUndefinedFunction,
  kWidthMismatch,
  kStrideOutOfRange,
  kTempBudgetExceeded,
  kBadKeyLength,
  kBadIvLength,
  kTagMismatch,
  kUnsupportedAlgorithm,
  kMissingBinding,
  kInvalidArgument,
  kIoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace csram
