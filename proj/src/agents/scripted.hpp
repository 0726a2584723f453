#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "game/episode.hpp"
#include "twentyq/lexicon.hpp"
#include "twentyq/scoring.hpp"

namespace ttl::agents {

// Candidates consistent with every answered question, in lexicon order.
// Membership and identity questions narrow the set; anything else leaves it.
std::vector<std::string> consistent_candidates(const std::vector<game::QA>& history,
                                               const twentyq::Lexicon& lexicon);

// Optimal halving questioner. Guesses the first remaining candidate when the
// planner says guessing is worth at least as much as splitting, otherwise
// asks about the first half (rounded up) of the candidates. Throws
// Error(kInconsistentHistory) when no candidate survives.
std::string scripted_binary_agent_act(const game::TwentyQView& view,
                                      const twentyq::Lexicon& lexicon,
                                      const twentyq::OptimalPlanner& planner);

class ScriptedBinaryActor final : public game::Actor {
 public:
  explicit ScriptedBinaryActor(std::shared_ptr<const twentyq::Lexicon> lexicon);

  std::string respond(const game::ActionRequest& request, const game::Reprompt* reprompt) override;

 private:
  std::shared_ptr<const twentyq::Lexicon> lexicon_;
  std::shared_ptr<const twentyq::OptimalPlanner> planner_;
};

struct ScriptedVoteOptions {
  double noise = 0.35;         // chance of voting for a random other alive seat
  double invalid_rate = 0.0;   // chance of a first vote that must be refused
};

// Deterministic Undercover player. Clues carry a short signature of the
// seat's word, so seats holding the same word give matching clues. Votes go
// to the lowest seat whose latest clue signature differs from its own,
// except for seeded noise; all draws come from (seed, seat, phase).
class ScriptedUndercoverActor final : public game::Actor {
 public:
  ScriptedUndercoverActor(std::uint64_t seed, ScriptedVoteOptions options = {});

  std::string respond(const game::ActionRequest& request, const game::Reprompt* reprompt) override;

  static std::string clue_for(const std::string& word);

 private:
  std::uint64_t seed_;
  ScriptedVoteOptions options_;
};

}  // namespace ttl::agents
