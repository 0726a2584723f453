#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ttl {

enum class ErrorCode {
  kInvalidArgument = 1,
  kConfigError,
  kIoError,
  // game-core
  kMissingAnswerTags,
  kEmptyAnswer,
  kAgentFailure,
  // environments
  kOracleFailure,
  kRankOutOfRange,
  kPhaseIncomplete,
  kEmptyInput,
  kInconsistentHistory,
  // experience
  kDanglingAttachment,
  kBudgetExceeded,
  kMissingFile,
  kEmptyPolicy,
  // evaluation
  kUndefinedImprovement,
  kShapeMismatch,
  // llm-client
  kProviderUnavailable,
  kAuthError,
  kContentRefusal,
  kScriptExhausted,
  kCacheMiss,
  // storage
  kUnknownRun,
  kSchemaVersionMismatch,
  kCorruptLog,
  // sessions
  kSessionComplete,
  kSessionNotFound,
  kUnauthorized,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Provider-side failures that run_episode propagates rather than absorbs.
inline bool is_provider_error(ErrorCode code) {
  return code == ErrorCode::kProviderUnavailable ||
         code == ErrorCode::kAuthError || code == ErrorCode::kContentRefusal ||
         code == ErrorCode::kScriptExhausted || code == ErrorCode::kCacheMiss;
}

}  // namespace ttl
