#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "game/types.hpp"

namespace ttl::experience {

struct ExperienceRecord {
  std::string id;  // the episode id
  game::EpisodeTranscript transcript;
  double reward = 0.0;
  std::string reflection;

  bool operator==(const ExperienceRecord&) const = default;
};

enum class Provenance { kRuleOnly, kExperienceDerived, kHumanAuthored };

std::string_view provenance_name(Provenance p);
Provenance parse_provenance(std::string_view s);

struct PolicyDocument {
  std::string id;
  std::string text;
  Provenance provenance = Provenance::kRuleOnly;
  int version = 1;
  std::vector<std::string> sources;  // record ids; experience_derived only
  int token_length = 0;

  // Throws Error(kInvalidArgument).
  void validate() const;

  bool operator==(const PolicyDocument&) const = default;
};

PolicyDocument make_policy(std::string id, std::string text, Provenance provenance,
                           std::vector<std::string> sources = {}, int version = 1);

inline constexpr int kDefaultPolicyTokenCap = 400;

struct PolicyPool {
  std::optional<PolicyDocument> current;  // empty until the first update
  std::vector<PolicyDocument> history;    // superseded versions, oldest first
  int token_budget = kDefaultPolicyTokenCap;
};

// Game text shared by reflections, the full-experience section and the
// curator: a one-line summary plus the action list.
struct GameRendering {
  std::string summary;
  std::string turns;
};

GameRendering render_game(const game::EpisodeTranscript& t);

std::string render_experience_game(const ExperienceRecord& r, int number);

// Chronological blocks, numbered from 1.
std::string render_experience_section(const std::vector<ExperienceRecord>& records);

}  // namespace ttl::experience
