#pragma once

#include <string>
#include <vector>

#include "util/clock.hpp"

namespace ttl::llm {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

using Messages = std::vector<ChatMessage>;

struct ChatRequest {
  std::string model;
  double temperature = 1.0;
  int max_output_tokens = 1024;
  Messages messages;
};

struct ChatResponse {
  std::string text;
  std::string finish_reason = "stop";
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

struct RetryPolicy {
  int max_attempts = 4;
  std::vector<Millis> backoff{Millis(1000), Millis(2000), Millis(4000)};

  Millis delay_before(int attempt) const;  // attempt is 1-based, > 1
};

struct ProviderConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model_name = "gpt-4o";
  double temperature = 1.0;
  int max_output_tokens = 1024;
  RetryPolicy retry;
  int rate_limit_per_minute = 60;
  int timeout_seconds = 120;
  // Name of the environment variable holding the API key. The key itself is
  // never stored in any config or manifest.
  std::string api_key_env = "TTL_API_KEY";
};

}  // namespace ttl::llm
