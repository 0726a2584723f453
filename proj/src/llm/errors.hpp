#pragma once

#include <string>

#include "util/error.hpp"

namespace ttl::llm {

// Retryable failure (timeouts, 429, 5xx). ChatClient converts exhaustion into
// Error(kProviderUnavailable).
class TransientFailure : public Error {
 public:
  explicit TransientFailure(const std::string& message)
      : Error(ErrorCode::kProviderUnavailable, message) {}
};

}  // namespace ttl::llm
