#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "agents/prompt.hpp"
#include "agents/scripted.hpp"
#include "game/types.hpp"
#include "llm/provider.hpp"
#include "twentyq/lexicon.hpp"
#include "undercover/engine.hpp"

namespace ttl::eval {

enum class AgentMode { kLlm, kScripted };
enum class OracleMode { kLlm, kScripted };
enum class OpponentMode { kLlm, kScripted };

// Everything needed to stand up one episode of either game.
struct Harness {
  game::EnvironmentId env = game::EnvironmentId::kTwentyQ;
  std::uint64_t master_seed = 0;
  std::shared_ptr<llm::Provider> provider;  // backbone for agents, oracle, reflection

  AgentMode agent_mode = AgentMode::kLlm;
  OracleMode oracle_mode = OracleMode::kLlm;
  OpponentMode opponent_mode = OpponentMode::kLlm;
  int reprompt_budget = 1;
  int policy_token_cap = 400;

  std::shared_ptr<const twentyq::Lexicon> lexicon;  // bundled when null
  std::vector<undercover::WordPair> word_pairs;     // bundled when empty
  undercover::RoleLabels role_labels;
  int num_players = 5;
  agents::ScriptedVoteOptions vote_options;

  // Throws Error(kConfigError) for unusable combinations.
  void validate() const;

  std::string rules() const;
  std::uint64_t episode_seed(std::int64_t case_index) const;
  bool needs_provider_for_agents() const;
};

using EventSink = std::function<void(const std::string&)>;

// Plays one episode of `case_index` under `condition`.
game::EpisodeTranscript play_episode(const Harness& h, const game::ConditionSpec& condition,
                                     std::shared_ptr<const agents::AttachmentStore> store,
                                     std::int64_t case_index, const std::string& episode_id);

}  // namespace ttl::eval
