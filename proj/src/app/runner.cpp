#include "app/runner.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <random>

#include "eval/report.hpp"
#include "experience/learning.hpp"
#include "experience/tokenizer.hpp"
#include "llm/chat_client.hpp"
#include "llm/http_transport.hpp"
#include "llm/mock.hpp"
#include "storage/run_store.hpp"
#include "twentyq/lexicon.hpp"
#include "undercover/word_pairs.hpp"
#include "util/assets.hpp"
#include "util/error.hpp"
#include "util/hash.hpp"
#include "util/text.hpp"

namespace ttl::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now(const char* fmt) {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, fmt, &tm);
  return buf;
}

std::string generate_run_id(const RunRequest& r) {
  std::random_device rd;
  char suffix[8];
  std::snprintf(suffix, sizeof suffix, "%04x", rd() & 0xFFFF);
  return r.protocol + "-" + std::string(game::environment_name(r.env)) + "-" +
         utc_now("%Y%m%dT%H%M%SZ") + "-" + suffix;
}

bool needs_llm(const RunRequest& r) {
  if (r.protocol == "incremental") return true;
  if (r.agents == eval::AgentMode::kLlm) return true;
  if (r.env == game::EnvironmentId::kTwentyQ && r.oracle == eval::OracleMode::kLlm) return true;
  if (r.env == game::EnvironmentId::kUndercover && r.opponents == eval::OpponentMode::kLlm) {
    return true;
  }
  for (auto k : r.fixed.conditions) {
    if (k != game::ConditionKind::kBaseline && k != game::ConditionKind::kHumanPolicy) return true;
  }
  return false;
}

struct ProviderPlan {
  json descriptor = json::object();
  std::string api_key;  // http only; kept in memory
  std::optional<llm::MockScript> script;
  fs::path replay_log;
  bool http = false;
};

ProviderPlan plan_provider(const RunRequest& r) {
  ProviderPlan p;
  if (!needs_llm(r)) {
    p.descriptor = {{"kind", "none"}};
    return p;
  }
  if (r.mock_script) {
    p.script = llm::MockScript::from_file(*r.mock_script);
    p.descriptor = {{"kind", "mock"},
                    {"model", "mock"},
                    {"temperature", r.provider.temperature},
                    {"script", *r.mock_script},
                    {"script_sha256", sha256_hex(text::read_file(*r.mock_script))}};
    return p;
  }
  if (r.replay_run) {
    storage::RunStore src(r.out_dir);
    auto m = src.manifest(*r.replay_run);
    p.replay_log = src.run_dir(*r.replay_run) / "exchanges.jsonl";
    p.descriptor = m.provider;
    p.descriptor["replayed_from"] = *r.replay_run;
    return p;
  }
  p.api_key = llm::api_key_from_env(r.provider);
  p.http = true;
  p.descriptor = {{"kind", "http"},
                  {"endpoint", r.provider.endpoint},
                  {"model", r.provider.model_name},
                  {"temperature", r.provider.temperature},
                  {"max_output_tokens", r.provider.max_output_tokens},
                  {"rate_limit_per_minute", r.provider.rate_limit_per_minute},
                  {"api_key_env", r.provider.api_key_env}};
  return p;
}

std::shared_ptr<llm::ChatClient> build_client(const RunRequest& r, ProviderPlan& plan,
                                              const fs::path& run_dir) {
  if (plan.descriptor.value("kind", "") == "none") return nullptr;
  if (plan.script) {
    auto cache = std::make_shared<llm::ExchangeCache>(llm::CacheMode::kLogOnly,
                                                      run_dir / "exchanges.jsonl");
    return llm::mock_provider(*plan.script, cache, "mock");
  }
  if (!plan.replay_log.empty()) {
    auto cache = std::make_shared<llm::ExchangeCache>(llm::CacheMode::kReplay, plan.replay_log);
    llm::ProviderConfig cfg = r.provider;
    cfg.model_name = plan.descriptor.value("model", cfg.model_name);
    cfg.temperature = plan.descriptor.value("temperature", cfg.temperature);
    cfg.retry.max_attempts = 1;
    return std::make_shared<llm::ChatClient>(cfg, std::make_shared<llm::OfflineTransport>(),
                                             cache);
  }
  auto cache = std::make_shared<llm::ExchangeCache>(llm::CacheMode::kLogOnly,
                                                    run_dir / "exchanges.jsonl");
  auto transport = std::make_shared<llm::HttpTransport>(r.provider.endpoint, plan.api_key,
                                                        r.provider.timeout_seconds);
  auto limiter = std::make_shared<llm::RateLimiter>(r.provider.rate_limit_per_minute,
                                                    system_clock());
  return std::make_shared<llm::ChatClient>(r.provider, transport, cache, limiter);
}

eval::Harness build_harness(const RunRequest& r, std::shared_ptr<llm::Provider> provider) {
  eval::Harness h;
  h.env = r.env;
  h.master_seed = r.seed;
  h.provider = std::move(provider);
  h.agent_mode = r.agents;
  h.oracle_mode = r.oracle;
  h.opponent_mode = r.opponents;
  h.reprompt_budget = r.reprompt_budget;
  h.policy_token_cap = r.policy_token_cap;
  h.lexicon = twentyq::Lexicon::bundled();
  if (r.word_pairs_file) h.word_pairs = undercover::load_word_pairs(*r.word_pairs_file);
  h.role_labels = r.role_labels;
  h.num_players = r.num_players;
  h.vote_options.noise = r.vote_noise;
  return h;
}

}  // namespace

json RunOutcome::to_json() const {
  json files = json::array();
  for (const auto& [name, content] : reports) files.push_back((run_dir / name).string());
  return {{"run_id", run_id},
          {"run_dir", run_dir.string()},
          {"reports", files},
          {"report_csv", reports.count("report.csv") ? reports.at("report.csv") : ""},
          {"transport_calls", transport_calls},
          {"cache_hits", cache_hits}};
}

RunOutcome execute_run(const RunRequest& request) {
  RunRequest r = request;
  if (r.run_id.empty()) r.run_id = generate_run_id(r);
  storage::check_run_id(r.run_id);

  std::optional<experience::PolicyDocument> human;
  if (r.human_policy_file) human = experience::load_human_policy(*r.human_policy_file);

  // Resolved first so a missing key fails before anything is created.
  ProviderPlan plan = plan_provider(r);

  storage::RunStore store(r.out_dir);
  if (store.exists(r.run_id)) {
    throw Error(ErrorCode::kInvalidArgument, "run '" + r.run_id + "' already exists");
  }
  storage::RunManifest m;
  m.run_id = r.run_id;
  m.environment = r.env;
  m.protocol = r.protocol;
  m.config = r.snapshot();
  m.master_seed = r.seed;
  m.versions = {{"templates_sha256", assets::templates_digest()},
                {"tokenizer", experience::default_tokenizer().name()},
                {"lexicon_sha256", sha256_hex(assets::get("twentyq/lexicon.txt"))},
                {"schema", std::to_string(storage::kStoreSchemaVersion)}};
  m.provider = plan.descriptor;
  m.created_at = utc_now("%Y-%m-%dT%H:%M:%SZ");
  const fs::path dir = store.create(m);

  auto client = build_client(r, plan, dir);
  eval::Harness h = build_harness(r, client);
  const std::string id = r.run_id;
  auto events = [&](const std::string& msg) { store.append_event(id, msg); };
  store.append_event(id, "run started: " + r.protocol + " " +
                             std::string(game::environment_name(r.env)));

  if (r.protocol == "fixed") {
    eval::FixedSettingConfig fc = r.fixed;
    fc.human_policy = human;
    auto res = eval::run_fixed_setting(fc, h, events);
    for (const auto& e : res.experience_episodes) store.persist_episode(id, e);
    for (const auto& rec : res.records) store.persist_record(id, rec);
    for (const auto& p : res.policies) store.persist_policy(id, p);
    for (const auto& e : res.test_episodes) store.persist_episode(id, e);
  } else {
    auto res = eval::run_incremental(r.incremental, h, events);
    for (const auto& e : res.episodes) store.persist_episode(id, e);
    for (const auto& rec : res.records) store.persist_record(id, rec);
    for (const auto& v : res.lineage) {
      store.persist_policy(id, v.policy, {{"sample", v.sample}, {"round", v.round}});
    }
    if (res.curator_failures) {
      store.append_event(id, "curator failures: " + std::to_string(res.curator_failures));
    }
  }

  RunOutcome out;
  out.run_id = id;
  out.run_dir = dir;
  out.reports = eval::build_reports(eval::load_run(store, id));
  eval::write_reports(out.reports, dir);
  if (client) {
    out.transport_calls = client->transport_calls();
    out.cache_hits = client->cache_hits();
  }
  store.append_event(id, "run finished: " + std::to_string(out.transport_calls) +
                             " provider calls, " + std::to_string(out.cache_hits) +
                             " cache hits");
  return out;
}

std::map<std::string, std::string> regenerate_report(const fs::path& out_dir,
                                                     const std::string& run_id,
                                                     const fs::path& dest) {
  storage::RunStore store(out_dir);
  auto files = eval::build_reports(eval::load_run(store, run_id));
  eval::write_reports(files, dest.empty() ? store.run_dir(run_id) : dest);
  return files;
}

json ReplayOutcome::to_json() const {
  return {{"run_id", run_id},
          {"replay_dir", replay_dir.string()},
          {"identical", identical()},
          {"compared", compared},
          {"differing", differing},
          {"transport_calls", transport_calls},
          {"cache_hits", cache_hits}};
}

ReplayOutcome replay_run(const fs::path& out_dir, const std::string& run_id) {
  storage::RunStore store(out_dir);
  const fs::path dir = store.run_dir(run_id);
  const auto m = store.manifest(run_id);

  json cfg = m.config;
  cfg.erase("mock_script");
  cfg.erase("replay_run");
  cfg["out"] = (dir / "replay").string();
  cfg["run_id"] = run_id;
  RunRequest r = parse_run_request(cfg);

  // The replay store lives inside the run, so point the exchange log there.
  ProviderPlan plan;
  plan.descriptor = m.provider;
  if (plan.descriptor.value("kind", "") != "none") {
    plan.replay_log = dir / "exchanges.jsonl";
    if (!fs::exists(plan.replay_log)) {
      throw Error(ErrorCode::kMissingFile, "run " + run_id + " has no exchange log to replay");
    }
    plan.descriptor["replayed_from"] = run_id;
  }

  const fs::path replay_root = dir / "replay";
  fs::remove_all(replay_root / run_id);
  storage::RunStore rstore(replay_root);
  storage::RunManifest rm = m;
  rm.provider = plan.descriptor;
  rm.config = r.snapshot();
  const fs::path rdir = rstore.create(rm);

  auto client = build_client(r, plan, rdir);
  eval::Harness h = build_harness(r, client);
  std::optional<experience::PolicyDocument> human;
  if (r.human_policy_file) human = experience::load_human_policy(*r.human_policy_file);
  auto events = [&](const std::string& msg) { rstore.append_event(run_id, msg); };

  if (r.protocol == "fixed") {
    eval::FixedSettingConfig fc = r.fixed;
    fc.human_policy = human;
    auto res = eval::run_fixed_setting(fc, h, events);
    for (const auto& e : res.experience_episodes) rstore.persist_episode(run_id, e);
    for (const auto& rec : res.records) rstore.persist_record(run_id, rec);
    for (const auto& p : res.policies) rstore.persist_policy(run_id, p);
    for (const auto& e : res.test_episodes) rstore.persist_episode(run_id, e);
  } else {
    auto res = eval::run_incremental(r.incremental, h, events);
    for (const auto& e : res.episodes) rstore.persist_episode(run_id, e);
    for (const auto& rec : res.records) rstore.persist_record(run_id, rec);
    for (const auto& v : res.lineage) {
      rstore.persist_policy(run_id, v.policy, {{"sample", v.sample}, {"round", v.round}});
    }
  }
  // Human sessions are not re-played; carry them over so overlays match.
  const fs::path human_log = dir / storage::artifact_file(storage::Artifact::kHumanSessions);
  if (fs::exists(human_log)) {
    fs::copy_file(human_log, rdir / human_log.filename(), fs::copy_options::overwrite_existing);
  }
  auto reports = eval::build_reports(eval::load_run(rstore, run_id));
  eval::write_reports(reports, rdir);

  ReplayOutcome out;
  out.run_id = run_id;
  out.replay_dir = rdir;
  if (client) {
    out.transport_calls = client->transport_calls();
    out.cache_hits = client->cache_hits();
  }
  std::vector<std::string> names{"episodes.jsonl", "experience.jsonl", "policies.jsonl"};
  for (const auto& [name, content] : reports) names.push_back(name);
  for (const auto& name : names) {
    const bool a = fs::exists(dir / name);
    const bool b = fs::exists(rdir / name);
    if (!a && !b) continue;
    out.compared.push_back(name);
    if (a != b || text::read_file(dir / name) != text::read_file(rdir / name)) {
      out.differing.push_back(name);
    }
  }
  return out;
}

SessionServerConfig parse_session_config(const json& doc) {
  SessionServerConfig c;
  if (!doc.is_object()) throw Error(ErrorCode::kConfigError, "config: expected an object");
  for (const auto& [k, v] : doc.items()) {
    static const std::set<std::string> allowed{"rounds", "seed", "oracle", "mock_script",
                                               "out", "baseline_run", "provider"};
    if (!allowed.count(k)) throw Error(ErrorCode::kConfigError, k + ": unknown field");
  }
  c.rounds = doc.value("rounds", 20);
  if (c.rounds < 1) throw Error(ErrorCode::kConfigError, "rounds: must be >= 1");
  if (doc.contains("seed")) {
    c.seed = doc["seed"].is_string() ? std::stoull(doc["seed"].get<std::string>())
                                     : doc["seed"].get<std::uint64_t>();
  }
  c.oracle = doc.value("oracle", "scripted");
  if (c.oracle != "scripted" && c.oracle != "llm") {
    throw Error(ErrorCode::kConfigError, "oracle: expected \"llm\" or \"scripted\"");
  }
  if (doc.contains("mock_script")) c.mock_script = doc["mock_script"].get<std::string>();
  if (doc.contains("out")) c.out_dir = doc["out"].get<std::string>();
  if (doc.contains("baseline_run")) c.baseline_run = doc["baseline_run"].get<std::string>();
  if (doc.contains("provider")) {
    json wrapper{{"provider", doc["provider"]}, {"protocol", "fixed"}};
    c.provider = parse_run_request(wrapper).provider;
  }
  return c;
}

std::unique_ptr<session::SessionService> make_session_service(const SessionServerConfig& cfg) {
  session::SessionConfig sc;
  sc.rounds = cfg.rounds;
  sc.master_seed = cfg.seed;
  if (cfg.oracle == "llm") {
    std::shared_ptr<llm::Provider> provider;
    if (cfg.mock_script) {
      provider = llm::mock_provider(llm::MockScript::from_file(*cfg.mock_script));
    } else {
      auto transport = std::make_shared<llm::HttpTransport>(
          cfg.provider.endpoint, llm::api_key_from_env(cfg.provider), cfg.provider.timeout_seconds);
      provider = std::make_shared<llm::ChatClient>(
          cfg.provider, transport, nullptr,
          std::make_shared<llm::RateLimiter>(cfg.provider.rate_limit_per_minute, system_clock()));
    }
    sc.oracle = std::make_shared<twentyq::LlmOracle>(provider, twentyq::rules_text());
  }
  if (cfg.baseline_run) {
    const fs::path curves = *cfg.baseline_run / "curves.json";
    if (fs::exists(curves)) {
      json doc = json::parse(text::read_file(curves), nullptr, false);
      if (!doc.is_discarded()) {
        for (const auto& arm : doc.value("arms", json::array())) {
          if (arm.value("arm", "") != eval::kBaselineArm) continue;
          std::vector<double> pts;
          for (const auto& p : arm["points"]) pts.push_back(p.at("R").get<double>());
          sc.model_baseline = pts;
          sc.baseline_run = cfg.baseline_run->filename().string();
        }
      }
    }
  }
  if (cfg.out_dir) {
    fs::create_directories(*cfg.out_dir);
    const fs::path log = *cfg.out_dir / storage::artifact_file(storage::Artifact::kHumanSessions);
    const std::string run_id = cfg.out_dir->filename().string();
    auto mu = std::make_shared<std::mutex>();
    sc.on_round_closed = [log, run_id, mu](const game::EpisodeTranscript& t) {
      json j = json::parse(game::to_json_line(t));
      j["run_id"] = run_id;
      std::lock_guard lock(*mu);
      std::ofstream out(log, std::ios::binary | std::ios::app);
      out << j.dump() << '\n';
    };
  }
  return std::make_unique<session::SessionService>(std::move(sc));
}

}  // namespace ttl::app
