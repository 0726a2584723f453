#include "twentyq/env.hpp"

#include <numeric>

#include "game/seed.hpp"
#include "twentyq/scoring.hpp"
#include "util/assets.hpp"
#include "util/error.hpp"
#include "util/rng.hpp"
#include "util/text.hpp"

namespace ttl::twentyq {

bool TQState::terminal() const {
  return solved_rank.has_value() || turn() >= kMaxQuestions;
}

std::string rules_text() { return std::string(assets::get("twentyq/rules.txt")); }

TwentyQuestionsEnv::TwentyQuestionsEnv(std::shared_ptr<const Lexicon> lexicon,
                                       std::string secret,
                                       std::shared_ptr<Oracle> oracle,
                                       std::string actor_id)
    : lexicon_(std::move(lexicon)),
      oracle_(std::move(oracle)),
      actor_id_(std::move(actor_id)),
      rules_(rules_text()) {
  if (!lexicon_ || !oracle_) {
    throw Error(ErrorCode::kInvalidArgument, "environment needs a lexicon and an oracle");
  }
  auto canonical = lexicon_->find(secret);
  if (!canonical) {
    throw Error(ErrorCode::kInvalidArgument, "secret '" + secret + "' is not in the lexicon");
  }
  state_.secret = *canonical;
}

std::string render_state(const TQState& state) {
  std::string history;
  if (state.history.empty()) {
    history = "(no questions yet)";
  } else {
    for (std::size_t i = 0; i < state.history.size(); ++i) {
      if (i) history += '\n';
      history += "Q" + std::to_string(i + 1) + ": " + state.history[i].question +
                 " -> " + state.history[i].answer;
    }
  }
  return text::render(assets::get("templates/twentyq_state.txt"),
                      {{"asked", std::to_string(state.turn())},
                       {"max_turns", std::to_string(kMaxQuestions)},
                       {"history", history}});
}

std::optional<game::ActionRequest> TwentyQuestionsEnv::next_request() {
  if (terminal()) return std::nullopt;
  game::ActionRequest req;
  req.actor_id = actor_id_;
  req.phase = "ask";
  req.action = "question";
  req.rules = rules_;
  req.state_rendering = render_state(state_);
  req.observation = game::TwentyQView{state_.history, kMaxQuestions};
  return req;
}

OracleAnswer TwentyQuestionsEnv::ask(const std::string& question) {
  if (terminal()) {
    throw Error(ErrorCode::kInvalidArgument, "game is already over");
  }
  const OracleAnswer verdict = oracle_->answer(state_.secret, question);
  state_.history.push_back({question, std::string(answer_name(verdict))});
  if (verdict == OracleAnswer::kYes) {
    auto guess = classify_identity_guess(question, *lexicon_);
    if (guess && *guess == state_.secret) state_.solved_rank = state_.turn();
  }
  return verdict;
}

game::StepResult TwentyQuestionsEnv::apply(const game::ActionRequest&,
                                           const std::string& answer) {
  return {true, std::string(answer_name(ask(answer))), ""};
}

void TwentyQuestionsEnv::abstain(const game::ActionRequest&) {}

double TwentyQuestionsEnv::reward() const { return ndcg_at_20(state_.solved_rank); }

std::map<std::string, std::string> TwentyQuestionsEnv::metadata() const {
  return {{"secret", state_.secret},
          {"oracle", oracle_->kind()},
          {"questions", std::to_string(state_.turn())},
          {"solved_rank", state_.solved_rank ? std::to_string(*state_.solved_rank) : ""}};
}

std::string secret_for_case(const Lexicon& lexicon, std::uint64_t master_seed,
                            std::int64_t case_index) {
  if (case_index < 0) throw Error(ErrorCode::kInvalidArgument, "negative case index");
  const auto n = static_cast<std::int64_t>(lexicon.size());
  std::vector<std::size_t> order(lexicon.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(game::derive_seed(master_seed, "twentyq-order", case_index / n));
  rng.shuffle(order);
  return lexicon.at(order[static_cast<std::size_t>(case_index % n)]);
}

}  // namespace ttl::twentyq
