#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "agents/prompt.hpp"
#include "experience/records.hpp"
#include "experience/tokenizer.hpp"
#include "llm/provider.hpp"

namespace ttl::experience {

// One tagged reflection call over a finished, scored episode.
std::string generate_reflection(const game::EpisodeTranscript& transcript,
                                const std::string& rules, llm::Provider& provider,
                                int reprompt_budget = 1);

ExperienceRecord make_record(const game::EpisodeTranscript& transcript, std::string reflection);

struct DeriveOptions {
  int token_cap = kDefaultPolicyTokenCap;
  int reprompt_budget = 1;
  const Tokenizer* tokenizer = nullptr;  // default_tokenizer() when null
  std::string id;
};

// Rule-only when `records` is empty, experience-derived otherwise. An
// over-cap policy gets one condensation call; still over the cap is
// Error(kBudgetExceeded).
PolicyDocument derive_policy(const std::string& rules,
                             const std::vector<ExperienceRecord>& records,
                             llm::Provider& provider, const DeriveOptions& options = {});

struct PoolUpdate {
  PolicyPool pool;
  bool updated = false;
  std::string failure;  // why the pool was left unchanged
};

// One curator call over (current policy, newest record). On any agent-level
// failure or budget overrun the pool comes back unchanged with `failure`
// set; configuration-level provider errors still propagate.
PoolUpdate update_policy_pool(const PolicyPool& pool, const ExperienceRecord& record,
                              const std::string& rules, llm::Provider& provider,
                              const std::string& id_prefix = "pool",
                              const Tokenizer* tokenizer = nullptr);

// Throws Error(kMissingFile) or Error(kEmptyPolicy).
PolicyDocument load_human_policy(const std::filesystem::path& path);
PolicyDocument bundled_human_policy(game::EnvironmentId env);
PolicyDocument human_policy_from_text(std::string id, const std::string& text);

struct ContextStats {
  double instruction = 0.0;
  double experience = 0.0;
  double policy = 0.0;
  std::size_t bundles = 0;
};

ContextStats context_token_stats(const std::vector<agents::PromptBundle>& bundles,
                                 const Tokenizer& tokenizer = default_tokenizer());

}  // namespace ttl::experience
