#include "eval/harness.hpp"

#include "agents/llm_actor.hpp"
#include "game/seed.hpp"
#include "twentyq/env.hpp"
#include "twentyq/oracle.hpp"
#include "undercover/env.hpp"
#include "undercover/word_pairs.hpp"
#include "util/error.hpp"

namespace ttl::eval {

void Harness::validate() const {
  const bool llm_needed = agent_mode == AgentMode::kLlm ||
                          (env == game::EnvironmentId::kTwentyQ && oracle_mode == OracleMode::kLlm) ||
                          (env == game::EnvironmentId::kUndercover &&
                           opponent_mode == OpponentMode::kLlm);
  if (llm_needed && !provider) {
    throw Error(ErrorCode::kConfigError, "provider: required by the chosen agent/oracle modes");
  }
  if (reprompt_budget < 0) throw Error(ErrorCode::kConfigError, "reprompt_budget: must be >= 0");
  if (policy_token_cap < 1) throw Error(ErrorCode::kConfigError, "policy_token_cap: must be >= 1");
  if (env == game::EnvironmentId::kUndercover && num_players < 4) {
    throw Error(ErrorCode::kConfigError, "undercover.num_players: must be at least 4");
  }
}

std::string Harness::rules() const {
  return env == game::EnvironmentId::kTwentyQ ? twentyq::rules_text()
                                               : undercover::rules_text(role_labels);
}

std::uint64_t Harness::episode_seed(std::int64_t case_index) const {
  return game::derive_seed(master_seed, env, case_index);
}

bool Harness::needs_provider_for_agents() const { return agent_mode == AgentMode::kLlm; }

namespace {

agents::AgentSpec llm_spec(const Harness& h, const game::ConditionSpec& c) {
  agents::AgentSpec s;
  s.kind = agents::AgentKind::kLlm;
  s.provider = h.provider;
  s.condition = c;
  s.reprompt_budget = h.reprompt_budget;
  return s;
}

}  // namespace

game::EpisodeTranscript play_episode(const Harness& h, const game::ConditionSpec& condition,
                                     std::shared_ptr<const agents::AttachmentStore> store,
                                     std::int64_t case_index, const std::string& episode_id) {
  game::EpisodeContext ctx;
  ctx.episode_id = episode_id;
  ctx.condition = condition;
  ctx.case_index = case_index;
  ctx.seed = h.episode_seed(case_index);
  if (h.provider) {
    ctx.metadata["model"] = h.provider->model_name();
    ctx.metadata["temperature"] = std::to_string(h.provider->temperature());
  }

  if (h.env == game::EnvironmentId::kTwentyQ) {
    auto lexicon = h.lexicon ? h.lexicon : twentyq::Lexicon::bundled();
    std::shared_ptr<twentyq::Oracle> oracle;
    if (h.oracle_mode == OracleMode::kScripted) {
      oracle = std::make_shared<twentyq::ScriptedOracle>(lexicon);
    } else {
      oracle = std::make_shared<twentyq::LlmOracle>(h.provider, twentyq::rules_text());
    }
    twentyq::TwentyQuestionsEnv env(
        lexicon, twentyq::secret_for_case(*lexicon, h.master_seed, case_index), oracle);
    std::unique_ptr<game::Actor> actor;
    if (h.agent_mode == AgentMode::kScripted) {
      actor = std::make_unique<agents::ScriptedBinaryActor>(lexicon);
    } else {
      actor = std::make_unique<agents::LlmActor>(llm_spec(h, condition), store);
    }
    game::ActorTable table{{std::string(twentyq::kQuestionerSeat), actor.get()}};
    return game::run_episode(env, table, ctx);
  }

  const auto& pairs = h.word_pairs.empty() ? undercover::bundled_word_pairs() : h.word_pairs;
  undercover::UndercoverConfig cfg;
  cfg.num_players = h.num_players;
  cfg.word_pair = undercover::pair_for_case(pairs, case_index);
  cfg.labels = h.role_labels;
  undercover::UndercoverEnv env(cfg, ctx.seed);

  std::vector<std::unique_ptr<game::Actor>> owned;
  game::ActorTable table;
  for (const auto& p : env.state().players) {
    const bool is_test = p.id == env.test_seat();
    const bool scripted = is_test ? h.agent_mode == AgentMode::kScripted
                                  : h.opponent_mode == OpponentMode::kScripted;
    if (scripted) {
      owned.push_back(std::make_unique<agents::ScriptedUndercoverActor>(ctx.seed, h.vote_options));
    } else {
      // Opponents share the backbone but never see the test agent's experience.
      owned.push_back(std::make_unique<agents::LlmActor>(
          llm_spec(h, is_test ? condition : game::ConditionSpec::baseline()), store));
    }
    table[p.id] = owned.back().get();
  }
  return game::run_episode(env, table, ctx);
}

}  // namespace ttl::eval
