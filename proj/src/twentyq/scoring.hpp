#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "game/types.hpp"
#include "twentyq/lexicon.hpp"

namespace ttl::twentyq {

inline constexpr int kMaxQuestions = 20;

// NDCG@20 with a single relevant word: 1/log2(r+1) for a solve at question r,
// 0 when unsolved. Throws Error(kRankOutOfRange) for r outside [1, 20].
double ndcg_at_20(std::optional<int> solved_rank);

// "is it (a|an|the)? <word>" with optional trailing punctuation, matched
// case-insensitively against whole lexicon entries.
std::optional<std::string> classify_identity_guess(std::string_view question,
                                                   const Lexicon& lexicon);

// "is it one of: w1, w2, ..." where every listed item is a lexicon word.
// Returns the canonical words, or nullopt for any other shape.
std::optional<std::vector<std::string>> parse_membership_question(
    std::string_view question, const Lexicon& lexicon);

std::string membership_question(const std::vector<std::string>& words);
std::string identity_question(std::string_view word);

// Value table for optimal play against the scripted oracle: with n
// candidates left and `asked` questions spent, either guess the first
// candidate (succeeds with probability 1/n, otherwise n-1 remain) or ask
// membership of the first ceil(n/2). Ties go to guessing.
class OptimalPlanner {
 public:
  explicit OptimalPlanner(int max_candidates);

  // Expected NDCG@20 of optimal play from this state.
  double value(int remaining, int asked) const;
  bool should_guess(int remaining, int asked) const;
  double guess_value(int remaining, int asked) const;
  double split_value(int remaining, int asked) const;

  int max_candidates() const { return max_n_; }

 private:
  double& at(std::vector<double>& table, int n, int k) const;
  double get(const std::vector<double>& table, int n, int k) const;

  int max_n_;
  std::vector<double> value_;
  std::vector<double> guess_;
  std::vector<double> split_;
};

// Expected NDCG@20 of perfect binary questioning over a uniformly drawn
// secret from `lexicon_size` candidates.
double optimal_expected_ndcg(int lexicon_size);

// Shared planner for the bundled lexicon size.
const OptimalPlanner& standard_planner();

// Recomputes a stored Twenty Questions transcript's reward from its turns
// and the recorded secret alone.
double score_transcript(const game::EpisodeTranscript& t, const Lexicon& lexicon);

// Rank of the first Yes-answered identity guess of `secret`, if any.
std::optional<int> solved_rank_of(const game::EpisodeTranscript& t,
                                  const Lexicon& lexicon);

}  // namespace ttl::twentyq
