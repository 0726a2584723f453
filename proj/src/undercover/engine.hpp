#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "game/observation.hpp"

namespace ttl::undercover {

struct WordPair {
  std::string normal;
  std::string difference;

  bool operator==(const WordPair&) const = default;
};

struct RoleLabels {
  std::string difference = "difference";
  std::string normal = "normal";
};

struct UndercoverConfig {
  int num_players = 5;
  WordPair word_pair;
  RoleLabels labels;

  // Throws Error(kConfigError).
  void validate() const;
};

struct Player {
  std::string id;  // "P1".."Pn", seating order
  std::string word;
  bool alive = true;
  bool is_difference = false;
};

enum class PhaseKind { kSpeaking, kVoting };

struct Phase {
  PhaseKind kind = PhaseKind::kSpeaking;
  int round = 1;

  bool operator==(const Phase&) const = default;
};

enum class Outcome { kNormalsWin, kDifferenceWins };

std::string_view outcome_name(Outcome o);
std::optional<Outcome> parse_outcome(std::string_view s);

// Consecutive no-elimination votes after which the difference is scored as
// having survived.
inline constexpr int kTieEscapeVotes = 3;

inline constexpr int kOpeningSpeakingRounds = 3;

struct MatchState {
  std::vector<Player> players;
  Phase phase;
  std::vector<game::Clue> clue_log;
  std::vector<game::VoteRecord> vote_log;  // resolved rounds only
  std::vector<game::VoteRecord> pending_votes;
  std::set<std::string> acted;  // seats done with the current phase
  std::vector<std::string> eliminated;
  int consecutive_ties = 0;
  int votes_held = 0;
  std::optional<Outcome> outcome;

  bool terminal() const { return outcome.has_value(); }
  const Player& player(std::string_view id) const;
  bool is_alive(std::string_view id) const;
  std::vector<std::string> alive_ids() const;
  std::string difference_id() const;
};

struct VoteTally {
  std::map<std::string, int> counts;
  std::optional<std::string> eliminated;

  bool operator==(const VoteTally&) const = default;
};

// One seat, chosen uniformly by the seed, holds the difference word.
MatchState assign_roles(const UndercoverConfig& config, std::uint64_t seed);

// Unique maximum is eliminated; a tie among the maxima (or no votes) is not.
// Voters must be alive; targets are validated beforehand.
VoteTally resolve_votes(const std::vector<std::pair<std::string, std::string>>& votes,
                        const std::set<std::string>& alive);

std::optional<Outcome> check_victory(const MatchState& state);

// Why a vote would be refused, or nullopt if it is valid.
std::optional<std::string> vote_rejection(const MatchState& state, std::string_view voter,
                                          std::string_view target);

// Throw Error(kInvalidArgument) on out-of-turn actions.
void record_clue(MatchState& state, const std::string& player, const std::string& text);
void record_vote(MatchState& state, const std::string& voter, const std::string& target);
void record_abstention(MatchState& state, const std::string& player);

bool phase_complete(const MatchState& state);

// Closes the current phase and opens the next one. Voting phases resolve
// their tally (returned), eliminate, and check victory. Throws
// Error(kPhaseIncomplete) while an alive seat has not acted.
std::optional<VoteTally> advance_phase(MatchState& state);

// Seats that still owe an action in the current phase, in seating order.
std::vector<std::string> pending_seats(const MatchState& state);

// Maps a free-form vote ("P3", "player p3", "p3.") onto a seat id.
std::optional<std::string> normalize_target(std::string_view answer,
                                            const std::vector<Player>& players);

bool side_wins(bool is_difference, Outcome outcome);

}  // namespace ttl::undercover
