#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eval/harness.hpp"
#include "eval/metrics.hpp"
#include "experience/records.hpp"

namespace ttl::eval {

struct FixedSettingConfig {
  int experience_rounds = 5;  // N
  int test_cases = 32;        // M
  std::vector<game::ConditionKind> conditions{std::begin(game::kAllConditions),
                                              std::end(game::kAllConditions)};
  // A condition is abandoned once more than this fraction of its M episodes fail.
  double max_failure_fraction = 0.5;
  std::optional<experience::PolicyDocument> human_policy;  // bundled when unset

  // Throws Error(kConfigError) with the offending field.
  void validate() const;
};

struct ConditionResult {
  game::ConditionSpec condition;
  std::optional<double> mean;  // unset when aborted
  std::optional<double> improvement_pct;
  int episodes = 0;
  int failures = 0;
  bool aborted = false;
};

struct FixedResult {
  std::vector<game::EpisodeTranscript> experience_episodes;
  std::vector<experience::ExperienceRecord> records;
  std::vector<experience::PolicyDocument> policies;
  std::vector<game::EpisodeTranscript> test_episodes;
  std::vector<ConditionResult> conditions;  // report order
};

FixedResult run_fixed_setting(const FixedSettingConfig& config, const Harness& harness,
                              const EventSink& events = {});

// Per-condition means and improvements recomputed from stored episodes.
std::vector<ConditionResult> summarize_conditions(
    const std::vector<game::EpisodeTranscript>& test_episodes, int test_cases,
    double max_failure_fraction);

struct IncrementalConfig {
  int rounds = 50;  // T
  int samples = 3;  // S

  void validate() const;
};

struct PolicyVersion {
  int sample = 0;
  int round = 0;  // round whose record produced this version
  experience::PolicyDocument policy;
};

struct IncrementalResult {
  std::vector<game::EpisodeTranscript> episodes;  // baseline arm, then experience arm
  std::vector<experience::ExperienceRecord> records;
  std::vector<PolicyVersion> lineage;
  int curator_failures = 0;
  RewardSeries series;
  std::map<std::string, CumulativeCurve> curves;
};

IncrementalResult run_incremental(const IncrementalConfig& config, const Harness& harness,
                                  const EventSink& events = {});

// Arm, sample and round of an incremental episode id, or nullopt.
struct IncrementalSlot {
  std::string arm;
  int sample = 0;
  int round = 0;
};
std::optional<IncrementalSlot> parse_incremental_id(const std::string& episode_id);

std::string fixed_episode_id(std::string_view phase, std::int64_t case_index);
std::string incremental_episode_id(std::string_view arm, int sample, int round);

// Rebuilds the reward series from stored incremental episodes.
RewardSeries series_from_episodes(const std::vector<game::EpisodeTranscript>& episodes);

}  // namespace ttl::eval
