#include <gtest/gtest.h>

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "app/runner.hpp"
#include "llm/mock.hpp"
#include "storage/run_store.hpp"
#include "support.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

using namespace ttl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string parse_error(const json& doc) {
  try {
    app::parse_run_request(doc);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << doc.dump();
  return "";
}

json small_fixed(const fs::path& out, const std::string& id) {
  return {{"protocol", "fixed"},
          {"env", "twentyq"},
          {"seed", 7},
          {"out", out.string()},
          {"run_id", id},
          {"experience_rounds", 2},
          {"test_cases", 3},
          {"mock_script", testutil::fixture("mock/rank2.json")}};
}

}  // namespace

TEST(RunConfig, ErrorsNameTheFieldPath) {
  EXPECT_NE(parse_error({{"protocol", "weekly"}}).find("protocol"), std::string::npos);
  EXPECT_NE(parse_error({{"bogus", 1}}).find("bogus"), std::string::npos);
  EXPECT_NE(parse_error({{"provider", {{"temperature", 3.0}}}}).find("provider.temperature"),
            std::string::npos);
  EXPECT_NE(parse_error({{"provider", {{"api_key", "x"}}}}).find("provider.api_key"),
            std::string::npos);
  EXPECT_NE(parse_error({{"conditions", json::array({"baseline", 3})}}).find("conditions[1]"),
            std::string::npos);
  EXPECT_NE(parse_error({{"conditions", "baseline,magic"}}).find("magic"), std::string::npos);
  EXPECT_NE(parse_error({{"seed", -1}}).find("seed"), std::string::npos);
  EXPECT_NE(parse_error({{"role_labels", {{"difference", " "}}}}).find("role_labels.difference"),
            std::string::npos);
  EXPECT_NE(parse_error({{"mock_script", "a"}, {"replay_run", "b"}}).find("mock_script"),
            std::string::npos);
}

TEST(RunConfig, DefaultsAndLargeSeed) {
  auto r = app::parse_run_request(json::object());
  EXPECT_EQ(r.protocol, "fixed");
  EXPECT_EQ(r.fixed.test_cases, 32);
  EXPECT_EQ(r.fixed.experience_rounds, 5);
  EXPECT_EQ(r.incremental.rounds, 50);
  EXPECT_EQ(r.incremental.samples, 3);
  EXPECT_EQ(r.fixed.conditions.size(), 5u);
  auto big = app::parse_run_request({{"seed", "18446744073709551615"}});
  EXPECT_EQ(big.seed, 18446744073709551615ULL);
  auto snap = big.snapshot();
  EXPECT_EQ(app::parse_run_request(snap).snapshot(), snap);
}

TEST(Runner, FixedMockRunReplaysIdentically) {
  testutil::TempDir dir;
  auto req = app::parse_run_request(small_fixed(dir.path(), "mock-fixed"));
  auto out = app::execute_run(req);
  EXPECT_GT(out.transport_calls, 0u);
  ASSERT_TRUE(out.reports.count("report.csv"));
  auto lines = text::split(text::trim(out.reports.at("report.csv")), '\n');
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(lines[1].rfind("baseline,,0.6309,,3,0,ok", 0), 0u) << lines[1];
  for (const char* f : {"manifest.json", "episodes.jsonl", "experience.jsonl", "policies.jsonl",
                        "exchanges.jsonl", "report.csv", "metrics.json", "events.log"}) {
    EXPECT_TRUE(fs::exists(out.run_dir / f)) << f;
  }

  // Running again under the same id is refused.
  EXPECT_THROW(app::execute_run(req), Error);

  auto rep = app::replay_run(dir.path(), "mock-fixed");
  EXPECT_TRUE(rep.identical()) << json(rep.differing).dump();
  EXPECT_EQ(rep.transport_calls, 0u);
  EXPECT_GT(rep.cache_hits, 0u);

  const std::string before = text::read_file(out.run_dir / "report.csv");
  testutil::TempDir elsewhere;
  auto files = app::regenerate_report(dir.path(), "mock-fixed", elsewhere.path());
  EXPECT_EQ(files.at("report.csv"), before);
  EXPECT_EQ(text::read_file(elsewhere / "metrics.json"),
            text::read_file(out.run_dir / "metrics.json"));
}

TEST(Runner, ReplayRunOptionUsesOnlyTheLog) {
  testutil::TempDir dir;
  app::execute_run(app::parse_run_request(small_fixed(dir.path(), "src")));
  auto cfg = small_fixed(dir.path(), "copy");
  cfg.erase("mock_script");
  cfg["replay_run"] = "src";
  auto out = app::execute_run(app::parse_run_request(cfg));
  EXPECT_EQ(out.transport_calls, 0u);
  EXPECT_EQ(text::read_file(out.run_dir / "report.csv"),
            text::read_file(dir / "src" / "report.csv"));
}

TEST(Runner, MissingApiKeyFailsBeforeTheRunExists) {
  testutil::TempDir dir;
  ::unsetenv("TTL_TEST_ABSENT_KEY");
  auto cfg = small_fixed(dir.path(), "nokey");
  cfg.erase("mock_script");
  cfg["provider"] = {{"api_key_env", "TTL_TEST_ABSENT_KEY"}};
  try {
    app::execute_run(app::parse_run_request(cfg));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAuthError);
  }
  EXPECT_FALSE(fs::exists(dir / "nokey"));
}

TEST(Runner, ScriptedOnlyRunNeedsNoProvider) {
  testutil::TempDir dir;
  json cfg{{"protocol", "fixed"}, {"env", "twentyq"}, {"out", dir.path().string()},
           {"run_id", "scripted"}, {"conditions", "baseline"}, {"test_cases", 4},
           {"agents", "scripted"}, {"oracle", "scripted"},
           {"provider", {{"api_key_env", "TTL_TEST_ABSENT_KEY"}}}};
  ::unsetenv("TTL_TEST_ABSENT_KEY");
  auto out = app::execute_run(app::parse_run_request(cfg));
  EXPECT_EQ(out.transport_calls, 0u);
  EXPECT_FALSE(fs::exists(out.run_dir / "exchanges.jsonl"));
  EXPECT_EQ(storage::RunStore(dir.path()).manifest("scripted").provider["kind"], "none");
}

TEST(Runner, HttpRunNeverPersistsTheKey) {
  const std::string key = "sk-test-5d41402abc4b2a76b9719d911017c592";
  ::setenv("TTL_TEST_HTTP_KEY", key.c_str(), 1);

  // A chat-completions lookalike answering from the mock script.
  llm::MockTransport scripted(llm::MockScript::from_file(testutil::fixture("mock/rank2.json")));
  httplib::Server server;
  std::atomic<int> bad_auth{0};
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    if (req.get_header_value("Authorization") != "Bearer " + key) ++bad_auth;
    auto body = json::parse(req.body);
    llm::ChatRequest cr;
    cr.model = body.value("model", "");
    for (const auto& m : body["messages"]) {
      cr.messages.push_back({m["role"].get<std::string>(), m["content"].get<std::string>()});
    }
    auto r = scripted.send(cr);
    res.set_content(json{{"choices", {{{"message", {{"content", r.text}}},
                                       {"finish_reason", "stop"}}}}}
                        .dump(),
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  testutil::TempDir dir;
  auto cfg = small_fixed(dir.path(), "http");
  cfg.erase("mock_script");
  cfg["conditions"] = "baseline,experience_policy";
  cfg["provider"] = {{"endpoint", "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions"},
                     {"model", "local-test"},
                     {"api_key_env", "TTL_TEST_HTTP_KEY"},
                     {"rate_limit_per_minute", 100000}};
  auto out = app::execute_run(app::parse_run_request(cfg));
  server.stop();
  th.join();
  ::unsetenv("TTL_TEST_HTTP_KEY");

  EXPECT_EQ(bad_auth.load(), 0);
  EXPECT_GT(out.transport_calls, 0u);
  int scanned = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir.path())) {
    if (!e.is_regular_file()) continue;
    ++scanned;
    EXPECT_EQ(text::read_file(e.path()).find(key), std::string::npos) << e.path();
  }
  EXPECT_GE(scanned, 6);
  EXPECT_EQ(out.to_json().dump().find(key), std::string::npos);
}

TEST(Runner, IncrementalMockRun) {
  testutil::TempDir dir;
  json cfg{{"protocol", "incremental"}, {"env", "twentyq"}, {"seed", 3},
           {"out", dir.path().string()}, {"run_id", "inc"}, {"rounds", 4}, {"samples", 2},
           {"mock_script", testutil::fixture("mock/rank2.json")}};
  auto out = app::execute_run(app::parse_run_request(cfg));
  storage::RunStore store(dir.path());
  EXPECT_EQ(store.read_episodes("inc").size(), 16u);
  EXPECT_EQ(store.read_policies("inc").size(), 8u);
  ASSERT_TRUE(out.reports.count("curves.json"));
  ASSERT_TRUE(out.reports.count("rewards.csv"));
  auto curves = json::parse(out.reports.at("curves.json"));
  ASSERT_EQ(curves["arms"].size(), 2u);
  EXPECT_EQ(curves["arms"][0]["points"].size(), 4u);
  auto rep = app::replay_run(dir.path(), "inc");
  EXPECT_TRUE(rep.identical()) << json(rep.differing).dump();
  EXPECT_EQ(rep.transport_calls, 0u);
}

TEST(SessionServer, ConfigParsing) {
  auto c = app::parse_session_config({{"rounds", 3}, {"seed", "9"}, {"oracle", "scripted"}});
  EXPECT_EQ(c.rounds, 3);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_THROW(app::parse_session_config({{"rounds", 0}}), Error);
  EXPECT_THROW(app::parse_session_config({{"oracle", "human"}}), Error);
  EXPECT_THROW(app::parse_session_config({{"port", 1}}), Error);
}
