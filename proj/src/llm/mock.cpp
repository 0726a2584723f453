#include "llm/mock.hpp"

#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::llm {

using nlohmann::json;

MockScript MockScript::from_json(const json& doc) {
  MockScript script;
  const std::string mode = doc.value("mode", "match");
  if (mode != "match" && mode != "sequential") {
    throw Error(ErrorCode::kConfigError,
                "mock.mode: expected \"match\" or \"sequential\", got \"" + mode + "\"");
  }
  script.sequential = mode == "sequential";
  if (!doc.contains("rules") || !doc["rules"].is_array()) {
    throw Error(ErrorCode::kConfigError, "mock.rules: expected an array");
  }
  std::size_t i = 0;
  for (const auto& r : doc["rules"]) {
    const std::string where = "mock.rules[" + std::to_string(i++) + "]";
    if (!r.is_object() || !r.contains("response")) {
      throw Error(ErrorCode::kConfigError, where + ".response: required");
    }
    MockRule rule;
    rule.pattern = r.value("match", "");
    rule.response = r["response"].get<std::string>();
    if (r.contains("capture")) {
      for (auto it = r["capture"].begin(); it != r["capture"].end(); ++it) {
        rule.captures[it.key()] = it.value().get<int>();
      }
    }
    if (r.contains("times")) rule.times = r["times"].get<int>();
    const std::string scope = r.value("scope", "last");
    if (scope == "all") {
      rule.scope = MatchScope::kAll;
    } else if (scope != "last") {
      throw Error(ErrorCode::kConfigError, where + ".scope: expected \"last\" or \"all\"");
    }
    script.rules.push_back(std::move(rule));
  }
  return script;
}

MockScript MockScript::from_file(const std::string& path) {
  json doc = json::parse(text::read_file(path), nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::kConfigError, "mock script " + path + ": not valid JSON");
  }
  return from_json(doc);
}

MockScript MockScript::sequence(std::vector<std::string> responses) {
  MockScript script;
  script.sequential = true;
  for (auto& r : responses) {
    MockRule rule;
    rule.response = std::move(r);
    script.rules.push_back(std::move(rule));
  }
  return script;
}

MockTransport::MockTransport(MockScript script) : sequential_(script.sequential) {
  if (script.rules.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mock script must not be empty");
  }
  for (auto& r : script.rules) {
    std::regex re;
    try {
      re = std::regex(r.pattern, std::regex::ECMAScript);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::kConfigError,
                  "mock rule pattern '" + r.pattern + "': " + e.what());
    }
    rules_.push_back({std::move(r), std::move(re), 0});
  }
}

ChatResponse MockTransport::send(const ChatRequest& request) {
  std::lock_guard lock(mu_);
  log_.push_back(request);
  if (sequential_) {
    if (cursor_ >= rules_.size()) {
      throw Error(ErrorCode::kScriptExhausted,
                  "mock script exhausted after " + std::to_string(cursor_) + " responses");
    }
    ChatResponse r;
    r.text = rules_[cursor_++].rule.response;
    return r;
  }

  std::string all;
  for (const auto& m : request.messages) {
    if (!all.empty()) all += '\n';
    all += m.content;
  }
  const std::string last = request.messages.empty() ? "" : request.messages.back().content;

  for (auto& compiled : rules_) {
    const auto& rule = compiled.rule;
    if (rule.times && compiled.used >= *rule.times) continue;
    const std::string& subject = rule.scope == MatchScope::kAll ? all : last;
    std::smatch m;
    if (!rule.pattern.empty() && !std::regex_search(subject, m, compiled.regex)) {
      continue;
    }
    for (const auto& [name, group] : rule.captures) {
      if (group >= 0 && static_cast<std::size_t>(group) < m.size() && m[group].matched) {
        vars_[name] = m[group].str();
      }
    }
    ++compiled.used;
    std::string text = rule.response;
    for (const auto& [name, value] : vars_) {
      text = text::replace_all(std::move(text), "{" + name + "}", value);
    }
    ChatResponse r;
    r.text = std::move(text);
    return r;
  }
  throw Error(ErrorCode::kScriptExhausted,
              "no mock rule matches request: " + last.substr(0, 120));
}

std::size_t MockTransport::calls() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

std::vector<ChatRequest> MockTransport::requests() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::shared_ptr<ChatClient> mock_provider(MockScript script,
                                          std::shared_ptr<ExchangeCache> cache,
                                          std::string model_name) {
  return mock_provider(std::make_shared<MockTransport>(std::move(script)),
                       std::move(cache), std::move(model_name));
}

std::shared_ptr<ChatClient> mock_provider(std::shared_ptr<MockTransport> transport,
                                          std::shared_ptr<ExchangeCache> cache,
                                          std::string model_name) {
  ProviderConfig cfg;
  cfg.model_name = std::move(model_name);
  cfg.endpoint = "mock://";
  cfg.retry.max_attempts = 1;
  cfg.retry.backoff.clear();
  return std::make_shared<ChatClient>(cfg, std::move(transport), std::move(cache));
}

}  // namespace ttl::llm
