#include "experience/learning.hpp"

#include "agents/llm_actor.hpp"
#include "util/assets.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::experience {

namespace {

const Tokenizer& tok_or_default(const Tokenizer* t) { return t ? *t : default_tokenizer(); }

std::string ask(llm::Provider& provider, const std::string& rules, const std::string& user,
                int budget, std::string_view action) {
  llm::Messages m{{"system", text::trim(rules)},
                  {"user", user + "\n\n" + agents::render_output_contract(action)}};
  return agents::complete_tagged(provider, std::move(m), budget, action).parsed.answer;
}

// Returns the condensed text, or nullopt when still over the cap.
std::optional<std::string> fit_to_cap(std::string policy, int cap, const std::string& rules,
                                      llm::Provider& provider, const Tokenizer& tok,
                                      int budget) {
  const int n = tok.count(policy);
  if (n <= cap) return policy;
  std::string shorter =
      ask(provider, rules,
          text::render(assets::get("templates/condense.txt"),
                       {{"tokens", std::to_string(n)},
                        {"limit", std::to_string(cap)},
                        {"policy", policy}}),
          budget, "strategy");
  if (tok.count(shorter) <= cap) return shorter;
  return std::nullopt;
}

}  // namespace

std::string generate_reflection(const game::EpisodeTranscript& transcript,
                                const std::string& rules, llm::Provider& provider,
                                int reprompt_budget) {
  if (!transcript.reward) {
    throw Error(ErrorCode::kInvalidArgument, "cannot reflect on an unscored episode");
  }
  GameRendering g = render_game(transcript);
  std::string user = text::render(assets::get("templates/reflection.txt"),
                                  {{"game", g.summary + "\n" + g.turns},
                                   {"reward", text::format_exact(*transcript.reward)}});
  return ask(provider, rules, user, reprompt_budget, "reflection");
}

ExperienceRecord make_record(const game::EpisodeTranscript& transcript, std::string reflection) {
  if (!transcript.reward) {
    throw Error(ErrorCode::kInvalidArgument, "experience needs a scored episode");
  }
  return {transcript.episode_id, transcript, *transcript.reward, std::move(reflection)};
}

PolicyDocument derive_policy(const std::string& rules,
                             const std::vector<ExperienceRecord>& records,
                             llm::Provider& provider, const DeriveOptions& options) {
  const Tokenizer& tok = tok_or_default(options.tokenizer);
  std::string user;
  std::vector<std::string> sources;
  if (records.empty()) {
    user = std::string(assets::get("templates/derive_policy_rules.txt"));
  } else {
    std::vector<std::string> blocks;
    for (std::size_t i = 0; i < records.size(); ++i) {
      blocks.push_back(render_experience_game(records[i], static_cast<int>(i) + 1));
      sources.push_back(records[i].id);
    }
    user = text::render(assets::get("templates/derive_policy_experience.txt"),
                        {{"games", text::join(blocks, "\n\n")}});
  }
  std::string policy = ask(provider, rules, user, options.reprompt_budget, "strategy");
  auto fitted = fit_to_cap(policy, options.token_cap, rules, provider, tok,
                           options.reprompt_budget);
  if (!fitted) {
    throw Error(ErrorCode::kBudgetExceeded,
                "derived policy exceeds " + std::to_string(options.token_cap) +
                    " tokens after condensation");
  }
  PolicyDocument d = make_policy(
      options.id.empty() ? (records.empty() ? "rule_policy" : "experience_policy") : options.id,
      *fitted, records.empty() ? Provenance::kRuleOnly : Provenance::kExperienceDerived,
      std::move(sources));
  d.token_length = tok.count(d.text);
  return d;
}

PoolUpdate update_policy_pool(const PolicyPool& pool, const ExperienceRecord& record,
                              const std::string& rules, llm::Provider& provider,
                              const std::string& id_prefix, const Tokenizer* tokenizer) {
  const Tokenizer& tok = tok_or_default(tokenizer);
  PoolUpdate out{pool, false, ""};
  try {
    std::string user = text::render(
        assets::get("templates/curator.txt"),
        {{"policy", pool.current ? pool.current->text : std::string("(no strategy yet)")},
         {"game", render_experience_game(record, 1)},
         {"limit", std::to_string(pool.token_budget)}});
    std::string revised = ask(provider, rules, user, 1, "strategy");
    auto fitted = fit_to_cap(revised, pool.token_budget, rules, provider, tok, 1);
    if (!fitted) {
      out.failure = "BudgetExceeded: revised policy over " +
                    std::to_string(pool.token_budget) + " tokens after condensation";
      return out;
    }
    const int version = pool.current ? pool.current->version + 1 : 1;
    std::vector<std::string> sources = pool.current ? pool.current->sources
                                                    : std::vector<std::string>{};
    sources.push_back(record.id);
    PolicyDocument next = make_policy(id_prefix + "/v" + std::to_string(version), *fitted,
                                      Provenance::kExperienceDerived, std::move(sources),
                                      version);
    next.token_length = tok.count(next.text);
    if (pool.current) out.pool.history.push_back(*pool.current);
    out.pool.current = std::move(next);
    out.updated = true;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::kAgentFailure:
      case ErrorCode::kContentRefusal:
      case ErrorCode::kProviderUnavailable:
      case ErrorCode::kInvalidArgument:
        out.failure = std::string(error_code_name(e.code())) + ": " + e.what();
        return out;
      default:
        throw;
    }
  }
  return out;
}

PolicyDocument human_policy_from_text(std::string id, const std::string& text) {
  if (text::trim(text).empty()) {
    throw Error(ErrorCode::kEmptyPolicy, "policy '" + id + "' is empty");
  }
  return make_policy(std::move(id), text, Provenance::kHumanAuthored);
}

PolicyDocument load_human_policy(const std::filesystem::path& path) {
  return human_policy_from_text("human_policy", text::read_file(path));
}

PolicyDocument bundled_human_policy(game::EnvironmentId env) {
  const char* name = env == game::EnvironmentId::kTwentyQ ? "policies/twentyq_human.txt"
                                                           : "policies/undercover_human.txt";
  return human_policy_from_text("human_policy", std::string(assets::get(name)));
}

ContextStats context_token_stats(const std::vector<agents::PromptBundle>& bundles,
                                 const Tokenizer& tokenizer) {
  ContextStats s;
  s.bundles = bundles.size();
  if (bundles.empty()) return s;
  for (const auto& b : bundles) {
    s.instruction += tokenizer.count(b.instruction);
    s.experience += tokenizer.count(b.experience_section);
    s.policy += tokenizer.count(b.policy_section);
  }
  const double n = static_cast<double>(bundles.size());
  s.instruction /= n;
  s.experience /= n;
  s.policy /= n;
  return s;
}

}  // namespace ttl::experience
