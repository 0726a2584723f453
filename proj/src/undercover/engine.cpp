#include "undercover/engine.hpp"

#include <algorithm>
#include <cctype>

#include "util/error.hpp"
#include "util/rng.hpp"
#include "util/text.hpp"

namespace ttl::undercover {

void UndercoverConfig::validate() const {
  if (num_players < 4) {
    throw Error(ErrorCode::kConfigError, "undercover.num_players must be at least 4");
  }
  if (word_pair.normal.empty() || word_pair.difference.empty()) {
    throw Error(ErrorCode::kConfigError, "undercover.word_pair: words must be non-empty");
  }
  if (text::iequals(word_pair.normal, word_pair.difference)) {
    throw Error(ErrorCode::kConfigError, "undercover.word_pair: the two words must differ");
  }
  if (text::trim(labels.difference).empty() || text::trim(labels.normal).empty()) {
    throw Error(ErrorCode::kConfigError, "undercover.role_labels must be non-empty");
  }
}

std::string_view outcome_name(Outcome o) {
  return o == Outcome::kNormalsWin ? "normals_win" : "difference_wins";
}

std::optional<Outcome> parse_outcome(std::string_view s) {
  if (s == "normals_win") return Outcome::kNormalsWin;
  if (s == "difference_wins") return Outcome::kDifferenceWins;
  return std::nullopt;
}

const Player& MatchState::player(std::string_view id) const {
  for (const auto& p : players) {
    if (p.id == id) return p;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown player " + std::string(id));
}

bool MatchState::is_alive(std::string_view id) const {
  for (const auto& p : players) {
    if (p.id == id) return p.alive;
  }
  return false;
}

std::vector<std::string> MatchState::alive_ids() const {
  std::vector<std::string> out;
  for (const auto& p : players) {
    if (p.alive) out.push_back(p.id);
  }
  return out;
}

std::string MatchState::difference_id() const {
  for (const auto& p : players) {
    if (p.is_difference) return p.id;
  }
  return {};
}

MatchState assign_roles(const UndercoverConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  const auto diff = rng.below(static_cast<std::uint64_t>(config.num_players));
  MatchState s;
  for (int i = 0; i < config.num_players; ++i) {
    Player p;
    p.id = "P" + std::to_string(i + 1);
    p.is_difference = static_cast<std::uint64_t>(i) == diff;
    p.word = p.is_difference ? config.word_pair.difference : config.word_pair.normal;
    s.players.push_back(std::move(p));
  }
  return s;
}

VoteTally resolve_votes(const std::vector<std::pair<std::string, std::string>>& votes,
                        const std::set<std::string>& alive) {
  VoteTally tally;
  for (const auto& [voter, target] : votes) {
    if (!alive.count(voter)) {
      throw Error(ErrorCode::kInvalidArgument, "vote from eliminated player " + voter);
    }
    ++tally.counts[target];
  }
  int best = 0;
  int at_best = 0;
  for (const auto& [target, n] : tally.counts) {
    if (n > best) {
      best = n;
      at_best = 1;
      tally.eliminated = target;
    } else if (n == best) {
      ++at_best;
    }
  }
  if (at_best != 1) tally.eliminated.reset();
  return tally;
}

std::optional<Outcome> check_victory(const MatchState& state) {
  int alive = 0;
  for (const auto& p : state.players) {
    if (p.is_difference && !p.alive) return Outcome::kNormalsWin;
    alive += p.alive ? 1 : 0;
  }
  if (alive <= 3) return Outcome::kDifferenceWins;
  return std::nullopt;
}

std::optional<std::string> vote_rejection(const MatchState& state, std::string_view voter,
                                          std::string_view target) {
  bool known = std::any_of(state.players.begin(), state.players.end(),
                           [&](const Player& p) { return p.id == target; });
  if (!known) return "no player named " + std::string(target);
  if (target == voter) return std::string("you cannot vote for yourself");
  if (!state.is_alive(target)) return std::string(target) + " has already been eliminated";
  return std::nullopt;
}

namespace {

void check_can_act(const MatchState& state, const std::string& player, PhaseKind kind) {
  if (state.terminal()) throw Error(ErrorCode::kInvalidArgument, "match is over");
  if (state.phase.kind != kind) {
    throw Error(ErrorCode::kInvalidArgument, "wrong phase for this action");
  }
  if (!state.is_alive(player)) {
    throw Error(ErrorCode::kInvalidArgument, player + " is not an alive player");
  }
  if (state.acted.count(player)) {
    throw Error(ErrorCode::kInvalidArgument, player + " already acted this phase");
  }
}

}  // namespace

void record_clue(MatchState& state, const std::string& player, const std::string& text) {
  check_can_act(state, player, PhaseKind::kSpeaking);
  state.clue_log.push_back({player, state.phase.round, text});
  state.acted.insert(player);
}

void record_vote(MatchState& state, const std::string& voter, const std::string& target) {
  check_can_act(state, voter, PhaseKind::kVoting);
  if (auto why = vote_rejection(state, voter, target)) {
    throw Error(ErrorCode::kInvalidArgument, *why);
  }
  state.pending_votes.push_back({state.phase.round, voter, target});
  state.acted.insert(voter);
}

void record_abstention(MatchState& state, const std::string& player) {
  check_can_act(state, player, state.phase.kind);
  state.acted.insert(player);
}

bool phase_complete(const MatchState& state) { return pending_seats(state).empty(); }

std::vector<std::string> pending_seats(const MatchState& state) {
  std::vector<std::string> out;
  if (state.terminal()) return out;
  for (const auto& p : state.players) {
    if (p.alive && !state.acted.count(p.id)) out.push_back(p.id);
  }
  return out;
}

std::optional<VoteTally> advance_phase(MatchState& state) {
  if (state.terminal()) throw Error(ErrorCode::kInvalidArgument, "match is over");
  auto pending = pending_seats(state);
  if (!pending.empty()) {
    throw Error(ErrorCode::kPhaseIncomplete, pending.front() + " has not acted yet");
  }
  state.acted.clear();

  if (state.phase.kind == PhaseKind::kSpeaking) {
    const int spoken = state.phase.round;
    if (spoken < kOpeningSpeakingRounds) {
      state.phase = {PhaseKind::kSpeaking, spoken + 1};
    } else {
      state.phase = {PhaseKind::kVoting, state.votes_held + 1};
    }
    return std::nullopt;
  }

  std::vector<std::pair<std::string, std::string>> votes;
  for (const auto& v : state.pending_votes) votes.emplace_back(v.voter, v.target);
  const auto alive = state.alive_ids();
  VoteTally tally = resolve_votes(votes, {alive.begin(), alive.end()});
  state.vote_log.insert(state.vote_log.end(), state.pending_votes.begin(),
                        state.pending_votes.end());
  state.pending_votes.clear();
  ++state.votes_held;

  if (tally.eliminated) {
    for (auto& p : state.players) {
      if (p.id == *tally.eliminated) p.alive = false;
    }
    state.eliminated.push_back(*tally.eliminated);
    state.consecutive_ties = 0;
    state.outcome = check_victory(state);
  } else if (++state.consecutive_ties >= kTieEscapeVotes) {
    state.outcome = Outcome::kDifferenceWins;
  }

  if (!state.outcome) {
    // Speaking(4) follows Voting(1), Speaking(5) follows Voting(2), ...
    state.phase = {PhaseKind::kSpeaking, kOpeningSpeakingRounds + state.votes_held};
  }
  return tally;
}

std::optional<std::string> normalize_target(std::string_view answer,
                                            const std::vector<Player>& players) {
  std::string a = text::to_lower(text::trim(answer));
  while (!a.empty() && std::ispunct(static_cast<unsigned char>(a.back()))) a.pop_back();
  if (text::starts_with_ci(a, "player ")) a = text::trim(a.substr(7));
  for (const auto& p : players) {
    if (text::iequals(a, p.id)) return p.id;
  }
  return std::nullopt;
}

bool side_wins(bool is_difference, Outcome outcome) {
  return is_difference == (outcome == Outcome::kDifferenceWins);
}

}  // namespace ttl::undercover
