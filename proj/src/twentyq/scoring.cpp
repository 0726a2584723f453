#include "twentyq/scoring.hpp"

#include <cmath>

#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::twentyq {

double ndcg_at_20(std::optional<int> solved_rank) {
  if (!solved_rank) return 0.0;
  const int r = *solved_rank;
  if (r < 1 || r > kMaxQuestions) {
    throw Error(ErrorCode::kRankOutOfRange,
                "rank " + std::to_string(r) + " outside [1, 20]");
  }
  if (r == 1) return 1.0;
  return 1.0 / std::log2(static_cast<double>(r) + 1.0);
}

namespace {

// Lower-cased, single-spaced, without trailing ?!. characters.
std::string normalize_question(std::string_view question) {
  std::string q = text::squash_spaces(question);
  while (!q.empty() && (q.back() == '?' || q.back() == '!' || q.back() == '.')) {
    q.pop_back();
  }
  return text::to_lower(text::trim(q));
}

}  // namespace

std::optional<std::string> classify_identity_guess(std::string_view question,
                                                   const Lexicon& lexicon) {
  const std::string q = normalize_question(question);
  constexpr std::string_view kPrefix = "is it ";
  if (q.rfind(kPrefix, 0) != 0) return std::nullopt;
  const std::string rest = q.substr(kPrefix.size());
  if (auto word = lexicon.find(rest)) return word;
  for (std::string_view article : {"a ", "an ", "the "}) {
    if (rest.rfind(article, 0) == 0) {
      if (auto word = lexicon.find(rest.substr(article.size()))) return word;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<std::string>> parse_membership_question(
    std::string_view question, const Lexicon& lexicon) {
  const std::string q = normalize_question(question);
  constexpr std::string_view kPrefix = "is it one of:";
  if (q.rfind(kPrefix, 0) != 0) return std::nullopt;
  std::vector<std::string> words;
  for (const auto& item : text::split(q.substr(kPrefix.size()), ',')) {
    auto word = lexicon.find(text::trim(item));
    if (!word) return std::nullopt;
    words.push_back(*word);
  }
  if (words.empty()) return std::nullopt;
  return words;
}

std::string membership_question(const std::vector<std::string>& words) {
  return "Is it one of: " + text::join(words, ", ") + "?";
}

std::string identity_question(std::string_view word) {
  return "Is it " + std::string(word) + "?";
}

OptimalPlanner::OptimalPlanner(int max_candidates) : max_n_(max_candidates) {
  if (max_candidates < 1) {
    throw Error(ErrorCode::kInvalidArgument, "lexicon_size must be >= 1");
  }
  const std::size_t cells =
      static_cast<std::size_t>(max_n_ + 1) * (kMaxQuestions + 1);
  value_.assign(cells, 0.0);
  guess_.assign(cells, 0.0);
  split_.assign(cells, -1.0);
  // Backward induction over the number of questions already asked.
  for (int k = kMaxQuestions - 1; k >= 0; --k) {
    const double hit = ndcg_at_20(k + 1);
    for (int n = 1; n <= max_n_; ++n) {
      const double dn = n;
      const double g = hit / dn + (dn - 1.0) / dn * get(value_, n - 1, k + 1);
      at(guess_, n, k) = g;
      double best = g;
      if (n >= 2) {
        const int a = (n + 1) / 2;
        const double s = a / dn * get(value_, a, k + 1) +
                         (n - a) / dn * get(value_, n - a, k + 1);
        at(split_, n, k) = s;
        if (s > best) best = s;
      }
      at(value_, n, k) = best;
    }
  }
}

double& OptimalPlanner::at(std::vector<double>& table, int n, int k) const {
  return table[static_cast<std::size_t>(n) * (kMaxQuestions + 1) + k];
}

double OptimalPlanner::get(const std::vector<double>& table, int n, int k) const {
  if (n <= 0 || k >= kMaxQuestions) return 0.0;
  return table[static_cast<std::size_t>(n) * (kMaxQuestions + 1) + k];
}

double OptimalPlanner::value(int remaining, int asked) const {
  if (remaining < 1 || remaining > max_n_ || asked < 0) {
    throw Error(ErrorCode::kInvalidArgument, "planner state out of range");
  }
  return get(value_, remaining, asked);
}

double OptimalPlanner::guess_value(int remaining, int asked) const {
  value(remaining, asked);
  return get(guess_, remaining, asked);
}

double OptimalPlanner::split_value(int remaining, int asked) const {
  value(remaining, asked);
  return remaining >= 2 ? get(split_, remaining, asked) : -1.0;
}

bool OptimalPlanner::should_guess(int remaining, int asked) const {
  return remaining == 1 || guess_value(remaining, asked) >= split_value(remaining, asked);
}

double optimal_expected_ndcg(int lexicon_size) {
  return OptimalPlanner(lexicon_size).value(lexicon_size, 0);
}

const OptimalPlanner& standard_planner() {
  static const OptimalPlanner planner(static_cast<int>(kStandardLexiconSize));
  return planner;
}

std::optional<int> solved_rank_of(const game::EpisodeTranscript& t,
                                  const Lexicon& lexicon) {
  const std::string secret = t.meta("secret");
  int rank = 0;
  for (const auto& turn : t.turns) {
    if (turn.phase != "ask") continue;
    ++rank;
    if (rank > kMaxQuestions) break;
    auto guess = classify_identity_guess(turn.answer, lexicon);
    if (guess && text::iequals(*guess, secret) && turn.feedback == "Yes") return rank;
  }
  return std::nullopt;
}

double score_transcript(const game::EpisodeTranscript& t, const Lexicon& lexicon) {
  if (t.failed()) return 0.0;
  return ndcg_at_20(solved_rank_of(t, lexicon));
}

}  // namespace ttl::twentyq
