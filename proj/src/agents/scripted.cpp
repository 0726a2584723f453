#include "agents/scripted.hpp"

#include <algorithm>
#include <set>

#include "game/seed.hpp"
#include "util/error.hpp"
#include "util/hash.hpp"
#include "util/rng.hpp"
#include "util/text.hpp"

namespace ttl::agents {

std::vector<std::string> consistent_candidates(const std::vector<game::QA>& history,
                                               const twentyq::Lexicon& lexicon) {
  std::vector<std::string> cands = lexicon.words();
  for (const auto& qa : history) {
    if (qa.answer != "Yes" && qa.answer != "No") continue;
    const bool yes = qa.answer == "Yes";
    std::set<std::string> named;
    if (auto guess = twentyq::classify_identity_guess(qa.question, lexicon)) {
      named.insert(*guess);
    } else if (auto members = twentyq::parse_membership_question(qa.question, lexicon)) {
      named.insert(members->begin(), members->end());
    } else {
      continue;
    }
    std::erase_if(cands, [&](const std::string& w) { return named.count(w) != 0 ? !yes : yes; });
  }
  return cands;
}

std::string scripted_binary_agent_act(const game::TwentyQView& view,
                                      const twentyq::Lexicon& lexicon,
                                      const twentyq::OptimalPlanner& planner) {
  const int asked = static_cast<int>(view.history.size());
  if (asked >= view.max_turns) throw Error(ErrorCode::kInvalidArgument, "game is over");
  auto cands = consistent_candidates(view.history, lexicon);
  if (cands.empty()) {
    throw Error(ErrorCode::kInconsistentHistory, "no candidate is consistent with the answers");
  }
  const int n = static_cast<int>(cands.size());
  if (planner.should_guess(n, asked)) return twentyq::identity_question(cands.front());
  cands.resize(static_cast<std::size_t>((n + 1) / 2));
  return twentyq::membership_question(cands);
}

ScriptedBinaryActor::ScriptedBinaryActor(std::shared_ptr<const twentyq::Lexicon> lexicon)
    : lexicon_(std::move(lexicon)) {
  if (!lexicon_) throw Error(ErrorCode::kInvalidArgument, "binary agent needs a lexicon");
  const int n = static_cast<int>(lexicon_->size());
  if (n == twentyq::kStandardLexiconSize) {
    planner_ = std::shared_ptr<const twentyq::OptimalPlanner>(
        &twentyq::standard_planner(), [](const twentyq::OptimalPlanner*) {});
  } else {
    planner_ = std::make_shared<const twentyq::OptimalPlanner>(n);
  }
}

std::string ScriptedBinaryActor::respond(const game::ActionRequest& request,
                                         const game::Reprompt*) {
  const auto* view = std::get_if<game::TwentyQView>(&request.observation);
  if (!view) throw Error(ErrorCode::kInvalidArgument, "binary agent needs a Twenty Questions view");
  return game::wrap_answer(scripted_binary_agent_act(*view, *lexicon_, *planner_));
}

ScriptedUndercoverActor::ScriptedUndercoverActor(std::uint64_t seed, ScriptedVoteOptions options)
    : seed_(seed), options_(options) {}

std::string ScriptedUndercoverActor::clue_for(const std::string& word) {
  static const char* kHex = "0123456789abcdef";
  const std::uint64_t h = fnv1a64(text::to_lower(word));
  std::string sig;
  for (int i = 0; i < 4; ++i) sig += kHex[(h >> (4 * i)) & 0xF];
  return "My word has signature " + sig + ".";
}

std::string ScriptedUndercoverActor::respond(const game::ActionRequest& request,
                                             const game::Reprompt* reprompt) {
  const auto* view = std::get_if<game::UndercoverView>(&request.observation);
  if (!view) throw Error(ErrorCode::kInvalidArgument, "vote agent needs an Undercover view");
  if (request.action != "vote") return game::wrap_answer(clue_for(view->word));

  Rng rng(game::derive_seed(seed_, view->self + "/" + request.phase, 0));
  std::vector<std::string> others;
  for (const auto& a : view->alive) {
    if (a != view->self) others.push_back(a);
  }
  if (others.empty()) throw Error(ErrorCode::kInvalidArgument, "no one to vote for");

  // Drawn first so the valid choice below is the same with or without it.
  const bool refuse_first = rng.unit() < options_.invalid_rate;
  const bool noisy = rng.unit() < options_.noise;
  const std::string random_pick = others[rng.below(others.size())];

  if (refuse_first && reprompt == nullptr) {
    if (!view->eliminated.empty()) return game::wrap_answer(view->eliminated.front());
    return game::wrap_answer(view->self);
  }

  if (noisy) return game::wrap_answer(random_pick);
  const std::string mine = clue_for(view->word);
  for (const auto& other : others) {
    const game::Clue* latest = nullptr;
    for (const auto& c : view->clues) {
      if (c.player == other) latest = &c;
    }
    if (latest && latest->text != mine) return game::wrap_answer(other);
  }
  return game::wrap_answer(others.front());
}

}  // namespace ttl::agents
