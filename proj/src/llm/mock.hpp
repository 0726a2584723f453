#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

#include "llm/chat_client.hpp"
#include "llm/provider.hpp"

namespace ttl::llm {

enum class MatchScope {
  kLastMessage,  // content of the final message only (default)
  kAll,          // all message contents joined by newlines
};

struct MockRule {
  std::string pattern;  // ECMAScript regex, searched; empty matches anything
  std::string response;  // {name} is replaced by a captured variable
  std::map<std::string, int> captures;  // variable -> capture group
  std::optional<int> times;  // consumable rule when set
  MatchScope scope = MatchScope::kLastMessage;
};

struct MockScript {
  bool sequential = false;
  std::vector<MockRule> rules;

  // {"mode": "match"|"sequential", "rules": [{"match", "response",
  //   "capture": {"name": group}, "times", "scope": "last"|"all"}]}
  static MockScript from_json(const nlohmann::json& doc);
  static MockScript from_file(const std::string& path);
  static MockScript sequence(std::vector<std::string> responses);
};

// Scripted chat backend. In match mode the first matching rule answers; in
// sequential mode responses are consumed in order whatever the request.
// Anything unanswerable raises Error(kScriptExhausted).
class MockTransport final : public Transport {
 public:
  explicit MockTransport(MockScript script);

  ChatResponse send(const ChatRequest& request) override;

  std::size_t calls() const;
  std::vector<ChatRequest> requests() const;

 private:
  struct CompiledRule {
    MockRule rule;
    std::regex regex;
    int used = 0;
  };

  mutable std::mutex mu_;
  bool sequential_;
  std::vector<CompiledRule> rules_;
  std::size_t cursor_ = 0;
  std::map<std::string, std::string> vars_;
  std::vector<ChatRequest> log_;
};

// mock_provider: a ChatClient over a MockTransport with no waits.
std::shared_ptr<ChatClient> mock_provider(
    MockScript script, std::shared_ptr<ExchangeCache> cache = nullptr,
    std::string model_name = "mock");

std::shared_ptr<ChatClient> mock_provider(
    std::shared_ptr<MockTransport> transport,
    std::shared_ptr<ExchangeCache> cache = nullptr,
    std::string model_name = "mock");

}  // namespace ttl::llm
