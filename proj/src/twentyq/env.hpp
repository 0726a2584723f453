#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "game/episode.hpp"
#include "twentyq/lexicon.hpp"
#include "twentyq/oracle.hpp"

namespace ttl::twentyq {

struct TQState {
  std::string secret;
  std::vector<game::QA> history;
  std::optional<int> solved_rank;

  int turn() const { return static_cast<int>(history.size()); }
  bool terminal() const;
};

inline constexpr std::string_view kQuestionerSeat = "questioner";

class TwentyQuestionsEnv final : public game::Environment {
 public:
  TwentyQuestionsEnv(std::shared_ptr<const Lexicon> lexicon, std::string secret,
                     std::shared_ptr<Oracle> oracle,
                     std::string actor_id = std::string(kQuestionerSeat));

  game::EnvironmentId id() const override { return game::EnvironmentId::kTwentyQ; }
  std::optional<game::ActionRequest> next_request() override;
  game::StepResult apply(const game::ActionRequest& request, const std::string& answer) override;
  void abstain(const game::ActionRequest& request) override;
  bool terminal() const override { return state_.terminal(); }
  double reward() const override;
  std::map<std::string, std::string> metadata() const override;

  const TQState& state() const { return state_; }

  // Applies one question and returns the oracle's verdict.
  OracleAnswer ask(const std::string& question);

 private:
  std::shared_ptr<const Lexicon> lexicon_;
  std::shared_ptr<Oracle> oracle_;
  std::string actor_id_;
  std::string rules_;
  TQState state_;
};

std::string render_state(const TQState& state);

// Fixed case order: case i draws from a seeded permutation of the lexicon,
// a fresh permutation per pass through the list.
std::string secret_for_case(const Lexicon& lexicon, std::uint64_t master_seed,
                            std::int64_t case_index);

std::string rules_text();

}  // namespace ttl::twentyq
