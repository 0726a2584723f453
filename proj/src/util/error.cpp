#include "util/error.hpp"

namespace ttl {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMissingAnswerTags: return "MissingAnswerTags";
    case ErrorCode::kEmptyAnswer: return "EmptyAnswer";
    case ErrorCode::kAgentFailure: return "AgentFailure";
    case ErrorCode::kOracleFailure: return "OracleFailure";
    case ErrorCode::kRankOutOfRange: return "RankOutOfRange";
    case ErrorCode::kPhaseIncomplete: return "PhaseIncomplete";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInconsistentHistory: return "InconsistentHistory";
    case ErrorCode::kDanglingAttachment: return "DanglingAttachment";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kEmptyPolicy: return "EmptyPolicy";
    case ErrorCode::kUndefinedImprovement: return "UndefinedImprovement";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kAuthError: return "AuthError";
    case ErrorCode::kContentRefusal: return "ContentRefusal";
    case ErrorCode::kScriptExhausted: return "ScriptExhausted";
    case ErrorCode::kCacheMiss: return "CacheMiss";
    case ErrorCode::kUnknownRun: return "UnknownRun";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kCorruptLog: return "CorruptLog";
    case ErrorCode::kSessionComplete: return "SessionComplete";
    case ErrorCode::kSessionNotFound: return "SessionNotFound";
    case ErrorCode::kUnauthorized: return "Unauthorized";
  }
  return "Unknown";
}

}  // namespace ttl
