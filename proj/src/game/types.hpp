#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ttl::game {

enum class EnvironmentId { kTwentyQ, kUndercover };

std::string_view environment_name(EnvironmentId id);
EnvironmentId parse_environment(std::string_view name);

enum class ConditionKind {
  kBaseline,
  kFullExperience,
  kRulePolicy,
  kExperiencePolicy,
  kHumanPolicy,
};

std::string_view condition_name(ConditionKind kind);
ConditionKind parse_condition(std::string_view name);

// Report order: no experience first, then the four experience forms.
inline constexpr ConditionKind kAllConditions[] = {
    ConditionKind::kBaseline, ConditionKind::kFullExperience,
    ConditionKind::kRulePolicy, ConditionKind::kExperiencePolicy,
    ConditionKind::kHumanPolicy};

// Which experience representation an agent receives. `attachment` names a
// PolicyDocument (policy kinds) or an experience bundle (full_experience).
struct ConditionSpec {
  ConditionKind kind = ConditionKind::kBaseline;
  std::string attachment;

  static ConditionSpec baseline() { return {}; }

  // Throws Error(kInvalidArgument) if the attachment rule is broken.
  void validate() const;

  bool operator==(const ConditionSpec&) const = default;
};

struct Turn {
  std::string actor_id;
  std::string phase;  // "ask", "speak:<k>", "vote:<v>"
  std::string raw_response;
  std::string reasoning;
  std::string answer;
  std::string feedback;

  bool operator==(const Turn&) const = default;
};

inline constexpr int kTranscriptSchemaVersion = 1;

struct EpisodeTranscript {
  std::string episode_id;
  EnvironmentId environment = EnvironmentId::kTwentyQ;
  ConditionSpec condition;
  std::int64_t case_index = 0;
  std::vector<Turn> turns;
  std::optional<double> reward;  // set once, at termination
  std::uint64_t seed = 0;
  std::map<std::string, std::string> metadata;

  // Throws Error(kInvalidArgument) when already set or outside [0, 1].
  void set_reward(double value);

  bool failed() const;
  std::string meta(const std::string& key, const std::string& fallback = "") const;

  bool operator==(const EpisodeTranscript&) const = default;
};

// One line of the episode log.
std::string to_json_line(const EpisodeTranscript& t);

// Throws Error(kSchemaVersionMismatch) for newer schemas and
// Error(kCorruptLog) for malformed records.
EpisodeTranscript transcript_from_json_line(std::string_view line);

// Checks the Turn invariants for every turn; returns the first violation.
std::optional<std::string> validate_transcript(const EpisodeTranscript& t);

}  // namespace ttl::game
