#include "app/config.hpp"

#include <set>

#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::app {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kConfigError, path + ": " + what);
}

void check_keys(const json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) fail(prefix + k, "unknown field");
  }
}

std::string get_string(const json& obj, const std::string& key, const std::string& path,
                       const std::string& fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  if (!obj[key].is_string()) fail(path, "expected a string");
  return obj[key].get<std::string>();
}

std::optional<std::string> get_opt_string(const json& obj, const std::string& key,
                                          const std::string& path) {
  if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
  if (!obj[key].is_string()) fail(path, "expected a string");
  return obj[key].get<std::string>();
}

int get_int(const json& obj, const std::string& key, const std::string& path, int fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  if (!obj[key].is_number_integer()) fail(path, "expected an integer");
  return obj[key].get<int>();
}

double get_number(const json& obj, const std::string& key, const std::string& path,
                  double fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  if (!obj[key].is_number()) fail(path, "expected a number");
  return obj[key].get<double>();
}

template <typename E>
E get_mode(const json& obj, const std::string& key, E fallback, E llm, E scripted) {
  const std::string v = get_string(obj, key, key, fallback == llm ? "llm" : "scripted");
  if (v == "llm") return llm;
  if (v == "scripted") return scripted;
  fail(key, "expected \"llm\" or \"scripted\"");
}

}  // namespace

std::vector<game::ConditionKind> parse_conditions(const std::string& csv) {
  std::vector<game::ConditionKind> out;
  if (text::iequals(text::trim(csv), "all")) {
    return {std::begin(game::kAllConditions), std::end(game::kAllConditions)};
  }
  for (const auto& part : text::split(csv, ',')) {
    const std::string name = text::trim(part);
    if (name.empty()) continue;
    try {
      auto k = game::parse_condition(name);
      if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    } catch (const Error&) {
      fail("conditions", "unknown condition '" + name + "'");
    }
  }
  if (out.empty()) fail("conditions", "no conditions given");
  return out;
}

RunRequest parse_run_request(const json& doc) {
  if (!doc.is_object()) fail("config", "expected an object");
  check_keys(doc, "",
             {"protocol", "env", "seed", "out", "run_id", "conditions", "experience_rounds",
              "test_cases", "rounds", "samples", "max_failure_fraction", "agents", "oracle",
              "opponents", "reprompt_budget", "policy_token_cap", "human_policy_file",
              "word_pairs_file", "role_labels", "num_players", "vote_noise", "provider",
              "mock_script", "replay_run"});
  RunRequest r;
  r.protocol = get_string(doc, "protocol", "protocol", r.protocol);
  if (r.protocol != "fixed" && r.protocol != "incremental") {
    fail("protocol", "expected \"fixed\" or \"incremental\"");
  }
  try {
    r.env = game::parse_environment(get_string(doc, "env", "env", "twentyq"));
  } catch (const Error&) {
    fail("env", "expected \"twentyq\" or \"undercover\"");
  }
  if (doc.contains("seed")) {
    const auto& s = doc["seed"];
    if (s.is_number_unsigned() || s.is_number_integer()) {
      if (s.is_number_integer() && s.get<std::int64_t>() < 0) fail("seed", "must be non-negative");
      r.seed = s.get<std::uint64_t>();
    } else if (s.is_string()) {
      try {
        r.seed = std::stoull(s.get<std::string>());
      } catch (const std::exception&) {
        fail("seed", "expected an unsigned integer");
      }
    } else {
      fail("seed", "expected an unsigned integer");
    }
  }
  r.out_dir = get_string(doc, "out", "out", r.out_dir);
  r.run_id = get_string(doc, "run_id", "run_id", "");

  if (doc.contains("conditions")) {
    const auto& c = doc["conditions"];
    if (c.is_string()) {
      r.fixed.conditions = parse_conditions(c.get<std::string>());
    } else if (c.is_array()) {
      std::vector<std::string> names;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c[i].is_string()) fail("conditions[" + std::to_string(i) + "]", "expected a string");
        names.push_back(c[i].get<std::string>());
      }
      r.fixed.conditions = parse_conditions(text::join(names, ","));
    } else {
      fail("conditions", "expected a list of condition names");
    }
  }
  r.fixed.experience_rounds = get_int(doc, "experience_rounds", "experience_rounds", 5);
  r.fixed.test_cases = get_int(doc, "test_cases", "test_cases", 32);
  r.fixed.max_failure_fraction =
      get_number(doc, "max_failure_fraction", "max_failure_fraction", 0.5);
  r.incremental.rounds = get_int(doc, "rounds", "rounds", 50);
  r.incremental.samples = get_int(doc, "samples", "samples", 3);

  r.agents = get_mode(doc, "agents", eval::AgentMode::kLlm, eval::AgentMode::kLlm,
                      eval::AgentMode::kScripted);
  r.oracle = get_mode(doc, "oracle", eval::OracleMode::kLlm, eval::OracleMode::kLlm,
                      eval::OracleMode::kScripted);
  r.opponents = get_mode(doc, "opponents", eval::OpponentMode::kLlm, eval::OpponentMode::kLlm,
                         eval::OpponentMode::kScripted);
  r.reprompt_budget = get_int(doc, "reprompt_budget", "reprompt_budget", 1);
  r.policy_token_cap = get_int(doc, "policy_token_cap", "policy_token_cap", 400);
  r.human_policy_file = get_opt_string(doc, "human_policy_file", "human_policy_file");
  r.word_pairs_file = get_opt_string(doc, "word_pairs_file", "word_pairs_file");
  r.num_players = get_int(doc, "num_players", "num_players", 5);
  r.vote_noise = get_number(doc, "vote_noise", "vote_noise", 0.35);
  if (doc.contains("role_labels")) {
    const auto& l = doc["role_labels"];
    if (!l.is_object()) fail("role_labels", "expected an object");
    check_keys(l, "role_labels.", {"difference", "normal"});
    r.role_labels.difference = get_string(l, "difference", "role_labels.difference", "difference");
    r.role_labels.normal = get_string(l, "normal", "role_labels.normal", "normal");
    if (text::trim(r.role_labels.difference).empty()) fail("role_labels.difference", "must be non-empty");
    if (text::trim(r.role_labels.normal).empty()) fail("role_labels.normal", "must be non-empty");
  }

  if (doc.contains("provider")) {
    const auto& p = doc["provider"];
    if (!p.is_object()) fail("provider", "expected an object");
    check_keys(p, "provider.",
               {"endpoint", "model", "temperature", "max_output_tokens", "max_attempts",
                "rate_limit_per_minute", "timeout_seconds", "api_key_env"});
    auto& c = r.provider;
    c.endpoint = get_string(p, "endpoint", "provider.endpoint", c.endpoint);
    c.model_name = get_string(p, "model", "provider.model", c.model_name);
    c.temperature = get_number(p, "temperature", "provider.temperature", c.temperature);
    c.max_output_tokens = get_int(p, "max_output_tokens", "provider.max_output_tokens", c.max_output_tokens);
    c.retry.max_attempts = get_int(p, "max_attempts", "provider.max_attempts", c.retry.max_attempts);
    c.rate_limit_per_minute =
        get_int(p, "rate_limit_per_minute", "provider.rate_limit_per_minute", c.rate_limit_per_minute);
    c.timeout_seconds = get_int(p, "timeout_seconds", "provider.timeout_seconds", c.timeout_seconds);
    c.api_key_env = get_string(p, "api_key_env", "provider.api_key_env", c.api_key_env);
    if (c.temperature < 0.0 || c.temperature > 2.0) fail("provider.temperature", "must lie in [0, 2]");
    if (c.max_output_tokens < 1) fail("provider.max_output_tokens", "must be >= 1");
    if (c.retry.max_attempts < 1) fail("provider.max_attempts", "must be >= 1");
    if (c.rate_limit_per_minute < 1) fail("provider.rate_limit_per_minute", "must be >= 1");
    if (c.timeout_seconds < 1) fail("provider.timeout_seconds", "must be >= 1");
  }
  r.mock_script = get_opt_string(doc, "mock_script", "mock_script");
  r.replay_run = get_opt_string(doc, "replay_run", "replay_run");
  if (r.mock_script && r.replay_run) fail("mock_script", "cannot be combined with replay_run");

  if (r.reprompt_budget < 0) fail("reprompt_budget", "must be >= 0");
  if (r.policy_token_cap < 1) fail("policy_token_cap", "must be >= 1");
  if (r.num_players < 4) fail("num_players", "must be at least 4");
  if (r.vote_noise < 0.0 || r.vote_noise > 1.0) fail("vote_noise", "must lie in [0, 1]");
  r.fixed.validate();
  r.incremental.validate();
  return r;
}

json RunRequest::snapshot() const {
  auto mode = [](bool llm) { return llm ? "llm" : "scripted"; };
  std::vector<std::string> conds;
  for (auto k : fixed.conditions) conds.emplace_back(game::condition_name(k));
  json j{{"protocol", protocol},
         {"env", game::environment_name(env)},
         {"seed", std::to_string(seed)},
         {"agents", mode(agents == eval::AgentMode::kLlm)},
         {"oracle", mode(oracle == eval::OracleMode::kLlm)},
         {"opponents", mode(opponents == eval::OpponentMode::kLlm)},
         {"reprompt_budget", reprompt_budget},
         {"policy_token_cap", policy_token_cap}};
  if (protocol == "fixed") {
    j["conditions"] = conds;
    j["experience_rounds"] = fixed.experience_rounds;
    j["test_cases"] = fixed.test_cases;
    j["max_failure_fraction"] = fixed.max_failure_fraction;
    if (human_policy_file) j["human_policy_file"] = *human_policy_file;
  } else {
    j["rounds"] = incremental.rounds;
    j["samples"] = incremental.samples;
  }
  if (env == game::EnvironmentId::kUndercover) {
    j["num_players"] = num_players;
    j["vote_noise"] = vote_noise;
    j["role_labels"] = {{"difference", role_labels.difference}, {"normal", role_labels.normal}};
    if (word_pairs_file) j["word_pairs_file"] = *word_pairs_file;
  }
  if (mock_script) j["mock_script"] = *mock_script;
  if (replay_run) j["replay_run"] = *replay_run;
  return j;
}

}  // namespace ttl::app
