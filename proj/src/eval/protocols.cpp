#include "eval/protocols.hpp"

#include <algorithm>
#include <regex>

#include "experience/learning.hpp"
#include "util/error.hpp"

namespace ttl::eval {

namespace {

using game::ConditionKind;

bool wants(const FixedSettingConfig& c, ConditionKind k) {
  return std::find(c.conditions.begin(), c.conditions.end(), k) != c.conditions.end();
}

void emit(const EventSink& events, const std::string& line) {
  if (events) events(line);
}

std::string attachment_for(ConditionKind k) {
  switch (k) {
    case ConditionKind::kBaseline: return "";
    case ConditionKind::kFullExperience: return "experience";
    case ConditionKind::kRulePolicy: return "rule_policy";
    case ConditionKind::kExperiencePolicy: return "experience_policy";
    case ConditionKind::kHumanPolicy: return "human_policy";
  }
  return "";
}

// Reflection failures leave the record without one rather than losing it.
experience::ExperienceRecord reflect(const Harness& h, const game::EpisodeTranscript& t,
                                     const std::string& rules, const EventSink& events) {
  std::string reflection;
  try {
    reflection = experience::generate_reflection(t, rules, *h.provider, h.reprompt_budget);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kAgentFailure && e.code() != ErrorCode::kContentRefusal) throw;
    emit(events, "reflection failed for " + t.episode_id + ": " + e.what());
  }
  return experience::make_record(t, std::move(reflection));
}

}  // namespace

void FixedSettingConfig::validate() const {
  if (experience_rounds < 0) throw Error(ErrorCode::kConfigError, "experience_rounds: must be >= 0");
  if (test_cases < 1) throw Error(ErrorCode::kConfigError, "test_cases: must be >= 1");
  if (conditions.empty()) throw Error(ErrorCode::kConfigError, "conditions: none selected");
  if (max_failure_fraction < 0.0 || max_failure_fraction > 1.0) {
    throw Error(ErrorCode::kConfigError, "max_failure_fraction: must lie in [0, 1]");
  }
  if (experience_rounds == 0 && (wants(*this, ConditionKind::kExperiencePolicy) ||
                                 wants(*this, ConditionKind::kFullExperience))) {
    throw Error(ErrorCode::kConfigError,
                "experience_rounds: experience conditions need at least one experience episode");
  }
}

void IncrementalConfig::validate() const {
  if (rounds < 1) throw Error(ErrorCode::kConfigError, "rounds: must be >= 1");
  if (samples < 1) throw Error(ErrorCode::kConfigError, "samples: must be >= 1");
}

std::string fixed_episode_id(std::string_view phase, std::int64_t case_index) {
  return "fixed/" + std::string(phase) + "/c" + std::to_string(case_index);
}

std::string incremental_episode_id(std::string_view arm, int sample, int round) {
  return "incremental/" + std::string(arm) + "/s" + std::to_string(sample) + "/r" +
         std::to_string(round);
}

std::optional<IncrementalSlot> parse_incremental_id(const std::string& episode_id) {
  static const std::regex re(R"(^incremental/([a-z_]+)/s(\d+)/r(\d+)$)");
  std::smatch m;
  if (!std::regex_match(episode_id, m, re)) return std::nullopt;
  return IncrementalSlot{m[1], std::stoi(m[2]), std::stoi(m[3])};
}

std::vector<ConditionResult> summarize_conditions(
    const std::vector<game::EpisodeTranscript>& test_episodes, int test_cases,
    double max_failure_fraction) {
  std::map<ConditionKind, std::vector<const game::EpisodeTranscript*>> by_kind;
  for (const auto& e : test_episodes) by_kind[e.condition.kind].push_back(&e);

  std::vector<ConditionResult> out;
  std::optional<double> base;
  for (ConditionKind k : game::kAllConditions) {
    auto it = by_kind.find(k);
    if (it == by_kind.end()) continue;
    ConditionResult r;
    r.condition = it->second.front()->condition;
    std::vector<double> rewards;
    for (const auto* e : it->second) {
      ++r.episodes;
      if (e->failed()) ++r.failures;
      rewards.push_back(e->reward.value_or(0.0));
    }
    r.aborted = r.failures > max_failure_fraction * test_cases || r.episodes < test_cases;
    if (!r.aborted) r.mean = mean(rewards);
    if (k == ConditionKind::kBaseline) base = r.mean;
    out.push_back(std::move(r));
  }
  for (auto& r : out) {
    if (r.condition.kind != ConditionKind::kBaseline) {
      r.improvement_pct = try_improvement_pct(base, r.mean);
    }
  }
  return out;
}

FixedResult run_fixed_setting(const FixedSettingConfig& config, const Harness& harness,
                              const EventSink& events) {
  config.validate();
  harness.validate();
  const bool needs_experience =
      wants(config, ConditionKind::kExperiencePolicy) || wants(config, ConditionKind::kFullExperience);
  const bool needs_derivation = needs_experience || wants(config, ConditionKind::kRulePolicy);
  if (needs_derivation && !harness.provider) {
    throw Error(ErrorCode::kConfigError,
                "provider: experience and policy conditions need a model to reflect and derive");
  }

  FixedResult result;
  const std::string rules = harness.rules();
  auto store = std::make_shared<agents::AttachmentStore>();

  // Phase 1: N experience episodes, reflected on once scored.
  if (needs_experience) {
    for (int i = 0; i < config.experience_rounds; ++i) {
      auto t = play_episode(harness, game::ConditionSpec::baseline(), store, i,
                            fixed_episode_id("experience", i));
      emit(events, "experience episode " + t.episode_id + " reward " +
                       std::to_string(t.reward.value_or(0.0)));
      result.records.push_back(reflect(harness, t, rules, events));
      result.experience_episodes.push_back(std::move(t));
    }
    store->experience["experience"] = result.records;
  }

  experience::DeriveOptions opts;
  opts.token_cap = harness.policy_token_cap;
  opts.reprompt_budget = harness.reprompt_budget;
  if (wants(config, ConditionKind::kRulePolicy)) {
    opts.id = "rule_policy";
    result.policies.push_back(experience::derive_policy(rules, {}, *harness.provider, opts));
  }
  if (wants(config, ConditionKind::kExperiencePolicy)) {
    opts.id = "experience_policy";
    result.policies.push_back(
        experience::derive_policy(rules, result.records, *harness.provider, opts));
  }
  if (wants(config, ConditionKind::kHumanPolicy)) {
    auto human = config.human_policy ? *config.human_policy
                                     : experience::bundled_human_policy(harness.env);
    human.id = "human_policy";
    result.policies.push_back(std::move(human));
  }
  for (const auto& p : result.policies) store->policies[p.id] = p;

  // Phase 2: the same M cases for every condition.
  for (ConditionKind k : game::kAllConditions) {
    if (!wants(config, k)) continue;
    game::ConditionSpec spec{k, attachment_for(k)};
    int failures = 0;
    for (int m = 0; m < config.test_cases; ++m) {
      const std::int64_t case_index = config.experience_rounds + m;
      auto t = play_episode(harness, spec, store, case_index,
                            fixed_episode_id(game::condition_name(k), case_index));
      if (t.failed()) {
        ++failures;
        emit(events, "episode " + t.episode_id + " failed: " + t.meta("failure"));
      }
      result.test_episodes.push_back(std::move(t));
      if (failures > config.max_failure_fraction * config.test_cases) {
        emit(events, "condition " + std::string(game::condition_name(k)) +
                         " aborted after " + std::to_string(failures) + " failures");
        break;
      }
    }
  }
  result.conditions = summarize_conditions(result.test_episodes, config.test_cases,
                                           config.max_failure_fraction);
  return result;
}

IncrementalResult run_incremental(const IncrementalConfig& config, const Harness& harness,
                                  const EventSink& events) {
  config.validate();
  harness.validate();
  if (!harness.provider) {
    throw Error(ErrorCode::kConfigError,
                "provider: the experience arm needs a model for reflection and curation");
  }
  IncrementalResult result;
  const std::string rules = harness.rules();
  auto empty_store = std::make_shared<const agents::AttachmentStore>();

  for (int s = 0; s < config.samples; ++s) {
    for (int t = 0; t < config.rounds; ++t) {
      auto ep = play_episode(harness, game::ConditionSpec::baseline(), empty_store, t,
                             incremental_episode_id(kBaselineArm, s, t));
      result.series.set(kBaselineArm, s, t, ep.reward.value_or(0.0));
      result.episodes.push_back(std::move(ep));
    }
  }

  for (int s = 0; s < config.samples; ++s) {
    experience::PolicyPool pool;
    pool.token_budget = harness.policy_token_cap;
    const std::string prefix = "pool/s" + std::to_string(s);
    for (int t = 0; t < config.rounds; ++t) {
      auto store = std::make_shared<agents::AttachmentStore>();
      game::ConditionSpec condition = game::ConditionSpec::baseline();
      if (pool.current) {
        store->policies[pool.current->id] = *pool.current;
        condition = {ConditionKind::kExperiencePolicy, pool.current->id};
      }
      auto ep = play_episode(harness, condition, store, t,
                             incremental_episode_id(kExperienceArm, s, t));
      result.series.set(kExperienceArm, s, t, ep.reward.value_or(0.0));

      auto record = reflect(harness, ep, rules, events);
      auto update = experience::update_policy_pool(pool, record, rules, *harness.provider, prefix);
      if (update.updated) {
        pool = std::move(update.pool);
        result.lineage.push_back({s, t, *pool.current});
      } else {
        ++result.curator_failures;
        emit(events, "curator kept the stale policy after " + ep.episode_id + ": " +
                         update.failure);
      }
      result.records.push_back(std::move(record));
      result.episodes.push_back(std::move(ep));
    }
  }
  result.curves = cumulative_curves(result.series);
  return result;
}

RewardSeries series_from_episodes(const std::vector<game::EpisodeTranscript>& episodes) {
  RewardSeries series;
  for (const auto& e : episodes) {
    auto slot = parse_incremental_id(e.episode_id);
    if (!slot) continue;
    series.set(slot->arm, slot->sample, slot->round, e.reward.value_or(0.0));
  }
  return series;
}

}  // namespace ttl::eval
