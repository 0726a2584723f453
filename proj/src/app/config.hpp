#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eval/harness.hpp"
#include "eval/protocols.hpp"
#include "llm/types.hpp"

namespace ttl::app {

// A run as requested by the operator, validated. Parse errors name the
// offending field path, e.g. "provider.temperature: expected a number".
struct RunRequest {
  std::string protocol = "fixed";
  game::EnvironmentId env = game::EnvironmentId::kTwentyQ;
  std::uint64_t seed = 0;
  std::string out_dir = "runs";
  std::string run_id;  // generated when empty

  eval::FixedSettingConfig fixed;
  eval::IncrementalConfig incremental;

  eval::AgentMode agents = eval::AgentMode::kLlm;
  eval::OracleMode oracle = eval::OracleMode::kLlm;
  eval::OpponentMode opponents = eval::OpponentMode::kLlm;
  int reprompt_budget = 1;
  int policy_token_cap = 400;

  std::optional<std::string> human_policy_file;
  std::optional<std::string> word_pairs_file;
  undercover::RoleLabels role_labels;
  int num_players = 5;
  double vote_noise = 0.35;

  llm::ProviderConfig provider;
  std::optional<std::string> mock_script;
  std::optional<std::string> replay_run;  // reuse that run's exchange log offline

  // Snapshot stored in the manifest (no secrets; only the key's env name).
  nlohmann::json snapshot() const;
};

RunRequest parse_run_request(const nlohmann::json& doc);

std::vector<game::ConditionKind> parse_conditions(const std::string& csv);

}  // namespace ttl::app
