#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "game/episode.hpp"
#include "undercover/engine.hpp"

namespace ttl::undercover {

// Seat of the evaluated agent, drawn from the episode seed independently of
// the role draw, so the test agent plays either side.
std::string test_seat_for(std::uint64_t episode_seed, int num_players);

std::string rules_text(const RoleLabels& labels);

class UndercoverEnv final : public game::Environment {
 public:
  UndercoverEnv(UndercoverConfig config, std::uint64_t seed);

  game::EnvironmentId id() const override { return game::EnvironmentId::kUndercover; }
  std::optional<game::ActionRequest> next_request() override;
  game::StepResult apply(const game::ActionRequest& request, const std::string& answer) override;
  void abstain(const game::ActionRequest& request) override;
  bool terminal() const override { return state_.terminal(); }
  double reward() const override;
  std::map<std::string, std::string> metadata() const override;

  const MatchState& state() const { return state_; }
  const std::string& test_seat() const { return test_seat_; }
  const UndercoverConfig& config() const { return config_; }

  game::UndercoverView view_for(const std::string& seat) const;

 private:
  void maybe_advance();

  UndercoverConfig config_;
  std::string rules_;
  std::string test_seat_;
  MatchState state_;
};

std::string render_view(const game::UndercoverView& view, bool voting);

// Recomputes the test seat's reward from the recorded votes and metadata.
double score_transcript(const game::EpisodeTranscript& t);

// Fraction of episodes whose outcome favors the recorded test side. Failed
// episodes count as losses. Throws Error(kEmptyInput).
double win_rate(const std::vector<game::EpisodeTranscript>& episodes);

}  // namespace ttl::undercover
