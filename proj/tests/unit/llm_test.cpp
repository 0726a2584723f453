#include <gtest/gtest.h>

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <set>
#include <thread>

#include "llm/cache.hpp"
#include "llm/chat_client.hpp"
#include "llm/errors.hpp"
#include "llm/http_transport.hpp"
#include "llm/mock.hpp"
#include "llm/rate_limiter.hpp"
#include "support.hpp"

using namespace ttl;
using namespace ttl::llm;
using nlohmann::json;

namespace {

Messages user(const std::string& s) { return {{"user", s}}; }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

// Fails transiently `failures` times, then answers.
class FlakyTransport : public Transport {
 public:
  explicit FlakyTransport(int failures, std::string finish = "stop")
      : failures_(failures), finish_(std::move(finish)) {}
  ChatResponse send(const ChatRequest&) override {
    ++calls;
    if (failures_-- > 0) throw TransientFailure("HTTP 503");
    ChatResponse r;
    r.text = "ok";
    r.finish_reason = finish_;
    return r;
  }
  int calls = 0;

 private:
  int failures_;
  std::string finish_;
};

ProviderConfig fast_config() {
  ProviderConfig c;
  c.model_name = "test-model";
  c.retry.max_attempts = 3;
  c.retry.backoff = {Millis(1000), Millis(2000)};
  return c;
}

}  // namespace

TEST(Mock, SequentialConsumesInOrder) {
  auto p = mock_provider(MockScript::sequence({"one", "two"}));
  EXPECT_EQ(p->complete(user("x")).text, "one");
  EXPECT_EQ(p->complete(user("x")).text, "two");
  EXPECT_EQ(code_of([&] { p->complete(user("x")); }), ErrorCode::kScriptExhausted);
}

TEST(Mock, MatchModeFirstRuleWinsWithCaptures) {
  auto script = MockScript::from_json(json::parse(R"js({
    "mode": "match",
    "rules": [
      {"match": "vote for: (P\\d)", "capture": {"t": 1}, "response": "<answer>{t}</answer>"},
      {"match": "vote", "response": "generic"},
      {"match": "once", "response": "first", "times": 1}
    ]})js"));
  auto p = mock_provider(script);
  EXPECT_EQ(p->complete(user("please vote for: P3 now")).text, "<answer>P3</answer>");
  EXPECT_EQ(p->complete(user("vote")).text, "generic");
  EXPECT_EQ(p->complete(user("once")).text, "first");
  EXPECT_EQ(code_of([&] { p->complete(user("once")); }), ErrorCode::kScriptExhausted);
  EXPECT_EQ(code_of([&] { p->complete(user("unmatched")); }), ErrorCode::kScriptExhausted);
}

TEST(Mock, ScopeAllSeesEveryMessage) {
  auto script = MockScript::from_json(json::parse(
      R"js({"rules": [{"match": "SYSTEMWORD", "scope": "all", "response": "hit"}]})js"));
  auto p = mock_provider(script);
  EXPECT_EQ(p->complete({{"system", "SYSTEMWORD"}, {"user", "u"}}).text, "hit");
}

TEST(Mock, ScriptValidation) {
  EXPECT_EQ(code_of([] { MockScript::from_json(json::parse(R"js({"mode": "x", "rules": []})js")); }),
            ErrorCode::kConfigError);
  EXPECT_EQ(code_of([] { MockScript::from_json(json::parse(R"js({"rules": [{"match": "a"}]})js")); }),
            ErrorCode::kConfigError);
  EXPECT_EQ(code_of([] { MockTransport t(MockScript{}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] {
              MockTransport t(MockScript::from_json(
                  json::parse(R"js({"rules": [{"match": "(", "response": "x"}]})js")));
            }),
            ErrorCode::kConfigError);
}

TEST(CacheKey, PureFunctionOfInputsAnd256Bits) {
  auto k = cache_key("m", user("hi"), 1.0, 0);
  EXPECT_EQ(k.size(), 64u);
  EXPECT_EQ(k, cache_key("m", user("hi"), 1.0, 0));
  std::set<std::string> keys{k, cache_key("m", user("hi"), 1.0, 1), cache_key("n", user("hi"), 1.0, 0),
                             cache_key("m", user("hj"), 1.0, 0), cache_key("m", user("hi"), 0.5, 0),
                             cache_key("m", {{"system", "hi"}}, 1.0, 0)};
  EXPECT_EQ(keys.size(), 6u);
}

TEST(ChatClient, RetriesTransientFailuresWithBackoff) {
  VirtualClock clock;
  auto t = std::make_shared<FlakyTransport>(2);
  ChatClient c(fast_config(), t, nullptr, nullptr, &clock);
  EXPECT_EQ(c.complete(user("x")).text, "ok");
  EXPECT_EQ(t->calls, 3);
  EXPECT_EQ(clock.now(), Millis(3000));
}

TEST(ChatClient, ExhaustedRetriesAreProviderUnavailable) {
  VirtualClock clock;
  auto t = std::make_shared<FlakyTransport>(10);
  ChatClient c(fast_config(), t, nullptr, nullptr, &clock);
  EXPECT_EQ(code_of([&] { c.complete(user("x")); }), ErrorCode::kProviderUnavailable);
  EXPECT_EQ(t->calls, 3);
}

TEST(ChatClient, RefusalIsDistinctError) {
  VirtualClock clock;
  ChatClient c(fast_config(), std::make_shared<FlakyTransport>(0, "content_filter"), nullptr,
               nullptr, &clock);
  EXPECT_EQ(code_of([&] { c.complete(user("x")); }), ErrorCode::kContentRefusal);
}

TEST(ChatClient, ReplayServesCacheWithZeroTransportCalls) {
  testutil::TempDir dir;
  auto path = dir / "exchanges.jsonl";
  {
    auto cache = std::make_shared<ExchangeCache>(CacheMode::kLogOnly, path);
    auto p = mock_provider(MockScript::sequence({"a", "b", "c"}), cache);
    EXPECT_EQ(p->complete(user("same")).text, "a");
    EXPECT_EQ(p->complete(user("same")).text, "b");
    EXPECT_EQ(p->complete(user("other")).text, "c");
    EXPECT_EQ(cache->size(), 3u);
  }
  auto cache = std::make_shared<ExchangeCache>(CacheMode::kReplay, path);
  ChatClient replay(fast_config(), std::make_shared<OfflineTransport>(), cache);
  ProviderConfig cfg;
  cfg.model_name = "mock";
  cfg.retry.max_attempts = 1;
  ChatClient r(cfg, std::make_shared<OfflineTransport>(), cache);
  EXPECT_EQ(r.complete(user("same")).text, "a");
  EXPECT_EQ(r.complete(user("same")).text, "b");
  EXPECT_EQ(r.complete(user("other")).text, "c");
  EXPECT_EQ(r.transport_calls(), 0u);
  EXPECT_EQ(r.cache_hits(), 3u);
  EXPECT_EQ(code_of([&] { r.complete(user("same")); }), ErrorCode::kCacheMiss);
  EXPECT_EQ(code_of([&] { replay.complete(user("same")); }), ErrorCode::kCacheMiss);
}

TEST(ExchangeCache, CorruptLineAndMissingReplayFile) {
  testutil::TempDir dir;
  text::write_file(dir / "bad.jsonl", "{not json\n");
  EXPECT_EQ(code_of([&] { ExchangeCache c(CacheMode::kRecord, dir / "bad.jsonl"); }),
            ErrorCode::kCorruptLog);
  EXPECT_EQ(code_of([&] { ExchangeCache c(CacheMode::kReplay, dir / "none.jsonl"); }),
            ErrorCode::kMissingFile);
}

TEST(ExchangeCache, RecordModeServesHitsAndAppendsMisses) {
  auto cache = std::make_shared<ExchangeCache>(CacheMode::kRecord, "");
  auto t = std::make_shared<MockTransport>(MockScript::sequence({"first", "second"}));
  auto p1 = mock_provider(t, cache);
  EXPECT_EQ(p1->complete(user("q")).text, "first");
  auto p2 = mock_provider(t, cache);  // fresh ordinals: same key again
  EXPECT_EQ(p2->complete(user("q")).text, "first");
  EXPECT_EQ(t->calls(), 1u);
}

TEST(RateLimiter, TwoConcurrentBatchesOfTenUnderSixtyPerMinute) {
  VirtualClock clock;
  RateLimiter limiter(60, clock);
  EXPECT_EQ(limiter.interval(), Millis(1000));
  std::vector<Millis> slots;
  std::mutex mu;
  auto batch = [&] {
    for (int i = 0; i < 10; ++i) {
      Millis s = limiter.acquire();
      std::lock_guard lock(mu);
      slots.push_back(s);
    }
  };
  std::thread a(batch), b(batch);
  a.join();
  b.join();
  ASSERT_EQ(slots.size(), 20u);
  std::sort(slots.begin(), slots.end());
  for (std::size_t i = 1; i < slots.size(); ++i) {
    EXPECT_GE(slots[i] - slots[i - 1], Millis(1000));
  }
  EXPECT_EQ(slots.back(), Millis(19000));
}

TEST(RateLimiter, ClientCallsAllCompleteThroughLimiter) {
  VirtualClock clock;
  auto limiter = std::make_shared<RateLimiter>(60, clock);
  auto transport = std::make_shared<MockTransport>(
      MockScript::from_json(json::parse(R"js({"rules": [{"response": "<answer>x</answer>"}]})js")));
  ProviderConfig cfg = fast_config();
  ChatClient c(cfg, transport, nullptr, limiter, &clock);
  std::atomic<int> ok{0};
  auto batch = [&](int id) {
    for (int i = 0; i < 10; ++i) {
      c.complete(user("b" + std::to_string(id) + "-" + std::to_string(i)));
      ++ok;
    }
  };
  std::thread a(batch, 0), b(batch, 1);
  a.join();
  b.join();
  EXPECT_EQ(ok.load(), 20);
  EXPECT_EQ(transport->calls(), 20u);
  EXPECT_GE(clock.now(), Millis(19000));
}

TEST(Http, EncodeDecode) {
  ChatRequest req;
  req.model = "m";
  req.temperature = 1.0;
  req.max_output_tokens = 64;
  req.messages = {{"system", "s"}, {"user", "u"}};
  auto body = json::parse(encode_chat_request(req));
  EXPECT_EQ(body["model"], "m");
  EXPECT_EQ(body["max_tokens"], 64);
  EXPECT_EQ(body["messages"][1]["content"], "u");

  auto r = decode_chat_response(
      R"js({"choices":[{"message":{"content":"hi"},"finish_reason":"stop"}],"usage":{"prompt_tokens":3,"completion_tokens":1}})js");
  EXPECT_EQ(r.text, "hi");
  EXPECT_EQ(r.prompt_tokens, 3);
  auto refused = decode_chat_response(
      R"js({"choices":[{"message":{"content":null,"refusal":"no"},"finish_reason":"stop"}]})js");
  EXPECT_EQ(refused.finish_reason, "refusal");
  EXPECT_THROW(decode_chat_response("{}"), TransientFailure);
}

TEST(Http, LocalServerStatusMapping) {
  httplib::Server server;
  std::atomic<int> hits{0};
  std::string seen_auth;
  server.Post("/ok", [&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    res.set_content(R"js({"choices":[{"message":{"content":"<answer>Yes</answer>"}}]})js",
                    "application/json");
  });
  server.Post("/auth", [](const httplib::Request&, httplib::Response& res) { res.status = 401; });
  server.Post("/busy", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 503;
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string base = "http://127.0.0.1:" + std::to_string(port);

  ChatRequest req;
  req.model = "m";
  req.messages = user("q");
  EXPECT_EQ(HttpTransport(base + "/ok", "k-123", 5).send(req).text, "<answer>Yes</answer>");
  EXPECT_EQ(seen_auth, "Bearer k-123");
  EXPECT_EQ(code_of([&] { HttpTransport(base + "/auth", "k", 5).send(req); }), ErrorCode::kAuthError);

  VirtualClock clock;
  ProviderConfig cfg = fast_config();
  ChatClient c(cfg, std::make_shared<HttpTransport>(base + "/busy", "k", 5), nullptr, nullptr,
               &clock);
  EXPECT_EQ(code_of([&] { c.complete(user("q")); }), ErrorCode::kProviderUnavailable);
  EXPECT_EQ(hits.load(), 3);

  server.stop();
  th.join();
}

TEST(Http, ApiKeyComesFromEnvironment) {
  ProviderConfig cfg;
  cfg.api_key_env = "TTL_TEST_KEY_UNSET_123";
  ::unsetenv(cfg.api_key_env.c_str());
  EXPECT_EQ(code_of([&] { api_key_from_env(cfg); }), ErrorCode::kAuthError);
  ::setenv(cfg.api_key_env.c_str(), "sk-test", 1);
  EXPECT_EQ(api_key_from_env(cfg), "sk-test");
  ::unsetenv(cfg.api_key_env.c_str());
  EXPECT_EQ(code_of([] { HttpTransport("no-scheme", "k", 1); }), ErrorCode::kConfigError);
}
