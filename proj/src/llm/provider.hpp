#pragma once

#include <memory>
#include <string>

#include "llm/types.hpp"

namespace ttl::llm {

class Provider {
 public:
  virtual ~Provider() = default;

  // Throws Error with kProviderUnavailable, kAuthError, kContentRefusal,
  // kScriptExhausted or kCacheMiss.
  virtual ChatResponse complete(const Messages& messages) = 0;

  virtual std::string model_name() const = 0;
  virtual double temperature() const = 0;
};

// Raw request/response hop underneath ChatClient.
class Transport {
 public:
  virtual ~Transport() = default;

  // Throws TransientFailure for retryable faults.
  virtual ChatResponse send(const ChatRequest& request) = 0;
};

}  // namespace ttl::llm
