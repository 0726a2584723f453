#pragma once

#include <string>

#include "llm/provider.hpp"

namespace ttl::llm {

// Common chat-completion wire format (POST {model, messages, temperature,
// max_tokens}) over HTTP(S).
class HttpTransport final : public Transport {
 public:
  HttpTransport(std::string endpoint, std::string api_key, int timeout_seconds);

  ChatResponse send(const ChatRequest& request) override;

 private:
  std::string base_;  // scheme://host[:port]
  std::string path_;
  std::string api_key_;
  int timeout_seconds_;
};

// Resolves config.api_key_env; Error(kAuthError) when unset or empty.
std::string api_key_from_env(const ProviderConfig& config);

// Serializes a request body / parses a response body. Exposed for tests.
std::string encode_chat_request(const ChatRequest& request);
ChatResponse decode_chat_response(const std::string& body);

}  // namespace ttl::llm
