#include "undercover/env.hpp"

#include <cctype>

#include "game/seed.hpp"
#include "util/assets.hpp"
#include "util/error.hpp"
#include "util/rng.hpp"
#include "util/text.hpp"

namespace ttl::undercover {

namespace {

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string list_or_none(const std::vector<std::string>& v) {
  return v.empty() ? "(none)" : text::join(v, ", ");
}

}  // namespace

std::string test_seat_for(std::uint64_t episode_seed, int num_players) {
  Rng rng(game::derive_seed(episode_seed, "test-seat", 0));
  return "P" + std::to_string(rng.below(static_cast<std::uint64_t>(num_players)) + 1);
}

std::string rules_text(const RoleLabels& labels) {
  return text::render(assets::get("undercover/rules.txt"),
                      {{"Difference", capitalize(labels.difference)},
                       {"difference", labels.difference},
                       {"normal", labels.normal}});
}

UndercoverEnv::UndercoverEnv(UndercoverConfig config, std::uint64_t seed)
    : config_(std::move(config)) {
  state_ = assign_roles(config_, seed);
  rules_ = rules_text(config_.labels);
  test_seat_ = test_seat_for(seed, config_.num_players);
}

game::UndercoverView UndercoverEnv::view_for(const std::string& seat) const {
  game::UndercoverView v;
  v.self = seat;
  v.word = state_.player(seat).word;
  for (const auto& p : state_.players) v.players.push_back(p.id);
  v.alive = state_.alive_ids();
  v.clues = state_.clue_log;
  v.votes = state_.vote_log;
  v.eliminated = state_.eliminated;
  v.round = state_.phase.round;
  return v;
}

std::string render_view(const game::UndercoverView& view, bool voting) {
  std::vector<std::string> clues;
  for (const auto& c : view.clues) {
    clues.push_back(c.player + " (round " + std::to_string(c.round) + "): " + c.text);
  }
  std::vector<std::string> votes;
  for (const auto& v : view.votes) {
    votes.push_back("Voting round " + std::to_string(v.round) + ": " + v.voter + " -> " +
                    v.target);
  }
  std::map<std::string, std::string> values{
      {"self", view.self},
      {"word", view.word},
      {"players", text::join(view.players, ", ")},
      {"alive", text::join(view.alive, ", ")},
      {"eliminated", list_or_none(view.eliminated)},
      {"clues", clues.empty() ? "(none)" : text::join(clues, "\n")},
      {"votes", votes.empty() ? "(none)" : text::join(votes, "\n")},
      {"round", std::to_string(view.round)}};
  if (!voting) return text::render(assets::get("templates/undercover_speak.txt"), values);
  std::vector<std::string> candidates;
  for (const auto& a : view.alive) {
    if (a != view.self) candidates.push_back(a);
  }
  values["candidates"] = text::join(candidates, ", ");
  return text::render(assets::get("templates/undercover_vote.txt"), values);
}

std::optional<game::ActionRequest> UndercoverEnv::next_request() {
  auto pending = pending_seats(state_);
  if (pending.empty()) return std::nullopt;
  const bool voting = state_.phase.kind == PhaseKind::kVoting;
  game::ActionRequest req;
  req.actor_id = pending.front();
  req.phase = (voting ? "vote:" : "speak:") + std::to_string(state_.phase.round);
  req.action = voting ? "vote" : "clue";
  req.rules = rules_;
  auto view = view_for(req.actor_id);
  req.state_rendering = render_view(view, voting);
  req.observation = std::move(view);
  return req;
}

void UndercoverEnv::maybe_advance() {
  while (!state_.terminal() && phase_complete(state_)) advance_phase(state_);
}

game::StepResult UndercoverEnv::apply(const game::ActionRequest& request,
                                      const std::string& answer) {
  game::StepResult r;
  if (state_.phase.kind == PhaseKind::kSpeaking) {
    record_clue(state_, request.actor_id, answer);
  } else {
    auto target = normalize_target(answer, state_.players);
    std::optional<std::string> why =
        target ? vote_rejection(state_, request.actor_id, *target)
               : std::optional<std::string>("no player named " + text::trim(answer));
    if (why) return {false, "", *why};
    record_vote(state_, request.actor_id, *target);
    r.feedback = *target;
  }
  maybe_advance();
  return r;
}

void UndercoverEnv::abstain(const game::ActionRequest& request) {
  record_abstention(state_, request.actor_id);
  maybe_advance();
}

double UndercoverEnv::reward() const {
  if (!state_.outcome) return 0.0;
  return side_wins(state_.player(test_seat_).is_difference, *state_.outcome) ? 1.0 : 0.0;
}

std::map<std::string, std::string> UndercoverEnv::metadata() const {
  const bool diff = state_.player(test_seat_).is_difference;
  return {{"pair_normal", config_.word_pair.normal},
          {"pair_difference", config_.word_pair.difference},
          {"role_labels", config_.labels.difference + "/" + config_.labels.normal},
          {"num_players", std::to_string(config_.num_players)},
          {"difference_seat", state_.difference_id()},
          {"test_seat", test_seat_},
          {"test_side", diff ? "difference" : "normal"},
          {"votes_held", std::to_string(state_.votes_held)},
          {"eliminated", text::join(state_.eliminated, ",")},
          {"outcome", state_.outcome ? std::string(outcome_name(*state_.outcome)) : ""}};
}

double score_transcript(const game::EpisodeTranscript& t) {
  if (t.failed()) return 0.0;
  const int n = std::stoi(t.meta("num_players", "0"));
  const std::string diff = t.meta("difference_seat");
  const std::string test = t.meta("test_seat");
  const int votes_held = std::stoi(t.meta("votes_held", "0"));
  if (n < 4 || diff.empty() || test.empty()) {
    throw Error(ErrorCode::kCorruptLog,
                "episode " + t.episode_id + ": missing undercover seat metadata");
  }
  MatchState s;
  for (int i = 1; i <= n; ++i) {
    Player p;
    p.id = "P" + std::to_string(i);
    p.is_difference = p.id == diff;
    s.players.push_back(p);
  }
  for (int v = 1; v <= votes_held && !s.outcome; ++v) {
    const std::string phase = "vote:" + std::to_string(v);
    std::vector<std::pair<std::string, std::string>> votes;
    for (const auto& turn : t.turns) {
      if (turn.phase != phase) continue;
      auto target = normalize_target(turn.answer, s.players);
      if (!target) {
        throw Error(ErrorCode::kCorruptLog,
                    "episode " + t.episode_id + ": unreadable vote '" + turn.answer + "'");
      }
      votes.emplace_back(turn.actor_id, *target);
    }
    const auto alive = s.alive_ids();
    VoteTally tally = resolve_votes(votes, {alive.begin(), alive.end()});
    if (tally.eliminated) {
      for (auto& p : s.players) {
        if (p.id == *tally.eliminated) p.alive = false;
      }
      s.consecutive_ties = 0;
      s.outcome = check_victory(s);
    } else if (++s.consecutive_ties >= kTieEscapeVotes) {
      s.outcome = Outcome::kDifferenceWins;
    }
  }
  if (!s.outcome) return 0.0;
  return side_wins(test == diff, *s.outcome) ? 1.0 : 0.0;
}

double win_rate(const std::vector<game::EpisodeTranscript>& episodes) {
  if (episodes.empty()) throw Error(ErrorCode::kEmptyInput, "win rate of zero episodes");
  int wins = 0;
  for (const auto& e : episodes) {
    if (e.failed()) continue;
    auto outcome = parse_outcome(e.meta("outcome"));
    if (!outcome) continue;
    if (side_wins(e.meta("test_side") == "difference", *outcome)) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(episodes.size());
}

}  // namespace ttl::undercover
