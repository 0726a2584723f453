#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "llm/mock.hpp"
#include "twentyq/env.hpp"
#include "twentyq/scoring.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

using namespace ttl;
using namespace ttl::twentyq;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

// DCG over a ranked list with one relevant item, divided by the ideal DCG.
double dcg_oracle(int relevant_position) {
  double dcg = 0.0, idcg = 0.0;
  for (int i = 1; i <= 20; ++i) {
    double gain = i == relevant_position ? 1.0 : 0.0;
    dcg += (std::pow(2.0, gain) - 1.0) / (std::log(i + 1.0) / std::log(2.0));
    double ideal_gain = i == 1 ? 1.0 : 0.0;
    idcg += (std::pow(2.0, ideal_gain) - 1.0) / (std::log(i + 1.0) / std::log(2.0));
  }
  return dcg / idcg;
}

// Independent memoized recursion of the halving/guessing game.
struct DpOracle {
  std::map<std::pair<int, int>, double> memo;
  double v(int n, int k) {
    if (n == 0 || k >= 20) return 0.0;
    auto key = std::make_pair(n, k);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    double guess = dcg_oracle(k + 1) / n + (n - 1.0) / n * v(n - 1, k + 1);
    double best = guess;
    if (n > 1) {
      int a = (n + 1) / 2;
      best = std::max(guess, double(a) / n * v(a, k + 1) + double(n - a) / n * v(n - a, k + 1));
    }
    return memo[key] = best;
  }
};

// Frozen from the oracle above (and a separate script); lexicon size 157.
constexpr double kOptimal157 = 0.3202437722282436;

}  // namespace

TEST(Ndcg, MatchesDcgDefinition) {
  for (int r = 1; r <= 20; ++r) {
    EXPECT_NEAR(ndcg_at_20(r), dcg_oracle(r), 1e-12);
    EXPECT_NEAR(ndcg_at_20(r), 1.0 / std::log2(r + 1.0), 1e-15);
  }
  EXPECT_EQ(ndcg_at_20(1), 1.0);
  EXPECT_EQ(ndcg_at_20(3), 0.5);
  EXPECT_EQ(ndcg_at_20(std::nullopt), 0.0);
}

TEST(Ndcg, StrictlyDecreasingWithinUnitInterval) {
  for (int r = 1; r < 20; ++r) EXPECT_GT(ndcg_at_20(r), ndcg_at_20(r + 1));
  EXPECT_GT(ndcg_at_20(20), 0.0);
}

TEST(Ndcg, RankOutOfRange) {
  EXPECT_EQ(code_of([] { ndcg_at_20(0); }), ErrorCode::kRankOutOfRange);
  EXPECT_EQ(code_of([] { ndcg_at_20(21); }), ErrorCode::kRankOutOfRange);
}

TEST(Lexicon, BundledHas157UniqueWords) {
  auto lex = Lexicon::bundled();
  ASSERT_EQ(lex->size(), 157u);
  std::set<std::string> folded;
  for (const auto& w : lex->words()) folded.insert(text::to_lower(w));
  EXPECT_EQ(folded.size(), 157u);
  EXPECT_EQ(lex->at(0), "Airplane");
  EXPECT_EQ(lex->find("baseball BAT").value(), "Baseball bat");
  EXPECT_FALSE(lex->find("living thing"));
}

TEST(Lexicon, RejectsDuplicatesAndEmpty) {
  EXPECT_EQ(code_of([] { Lexicon::from_text("Apple\napple\n"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { Lexicon::from_text("\n\n"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(Lexicon::from_text("A\n\nB\n").size(), 2u);
}

TEST(IdentityGuess, Examples) {
  auto lex = Lexicon::bundled();
  EXPECT_EQ(classify_identity_guess("Is it an apple?", *lex).value(), "Apple");
  EXPECT_FALSE(classify_identity_guess("Is it a living thing?", *lex));
  EXPECT_EQ(classify_identity_guess("is it Baseball bat", *lex).value(), "Baseball bat");
  EXPECT_EQ(classify_identity_guess("Is it the dog!", *lex).value(), "Dog");
  EXPECT_FALSE(classify_identity_guess("Is it an apple pie?", *lex));
}

TEST(IdentityGuess, EveryLexiconWordMatchesItself) {
  auto lex = Lexicon::bundled();
  for (const auto& w : lex->words()) {
    EXPECT_EQ(classify_identity_guess("is it " + w, *lex).value(), w);
    EXPECT_EQ(classify_identity_guess(identity_question(w), *lex).value(), w);
    EXPECT_EQ(classify_identity_guess("IS IT A " + text::to_lower(w) + ".", *lex).value(), w);
  }
}

TEST(Membership, ParseAndRender) {
  auto lex = Lexicon::bundled();
  auto q = membership_question({"Dog", "Cat", "Apple"});
  auto parsed = parse_membership_question(q, *lex);
  ASSERT_TRUE(parsed);
  EXPECT_EQ(*parsed, (std::vector<std::string>{"Dog", "Cat", "Apple"}));
  EXPECT_TRUE(parse_membership_question("is it one of: dog, cat, apple", *lex));
  EXPECT_FALSE(parse_membership_question("is it one of: dog, unicorn", *lex));
  EXPECT_FALSE(parse_membership_question("Does it grow on trees?", *lex));
}

TEST(ScriptedOracle, Examples) {
  auto lex = Lexicon::bundled();
  ScriptedOracle o(lex);
  EXPECT_EQ(o.answer("Apple", "Is it an apple?"), OracleAnswer::kYes);
  EXPECT_EQ(o.answer("Apple", "is it one of: Dog, Cat, Apple"), OracleAnswer::kYes);
  EXPECT_EQ(o.answer("Apple", "is it one of: Dog, Cat"), OracleAnswer::kNo);
  EXPECT_EQ(o.answer("Apple", "Is it a dog?"), OracleAnswer::kNo);
  EXPECT_EQ(o.answer("Apple", "Does it grow on trees?"), OracleAnswer::kInvalid);
}

TEST(LlmOracle, MapsTaggedRepliesAndFailsAfterOneReprompt) {
  auto p = llm::mock_provider(llm::MockScript::sequence(
      {"<answer>yes.</answer>", "hmm", "<answer>No</answer>", "x", "y"}));
  LlmOracle o(p, rules_text());
  EXPECT_EQ(o.answer("Apple", "Is it a fruit?"), OracleAnswer::kYes);
  EXPECT_EQ(o.answer("Apple", "Is it alive?"), OracleAnswer::kNo);
  EXPECT_EQ(code_of([&] { o.answer("Apple", "?"); }), ErrorCode::kOracleFailure);
  EXPECT_EQ(map_oracle_reply("INVALID"), OracleAnswer::kInvalid);
  EXPECT_FALSE(map_oracle_reply("maybe"));
}

TEST(LlmOracle, PromptCarriesRulesAndSecret) {
  auto t = std::make_shared<llm::MockTransport>(llm::MockScript::sequence({"<answer>No</answer>"}));
  LlmOracle o(llm::mock_provider(t), rules_text());
  o.answer("Banana", "Is it red?");
  auto reqs = t->requests();
  ASSERT_EQ(reqs.size(), 1u);
  std::string all;
  for (const auto& m : reqs[0].messages) all += m.content;
  EXPECT_NE(all.find("Banana"), std::string::npos);
  EXPECT_NE(all.find("Is it red?"), std::string::npos);
  EXPECT_NE(all.find(rules_text()), std::string::npos);
}

TEST(OptimalPlanner, MatchesIndependentRecursion) {
  DpOracle oracle;
  for (int n : {1, 2, 3, 4, 5, 8, 13, 40, 79, 157}) {
    EXPECT_NEAR(optimal_expected_ndcg(n), oracle.v(n, 0), 1e-12) << n;
  }
  EXPECT_EQ(optimal_expected_ndcg(1), 1.0);
  EXPECT_NEAR(optimal_expected_ndcg(157), kOptimal157, 1e-12);
}

TEST(OptimalPlanner, TwoCandidatesPreferGuessing) {
  const auto& p = standard_planner();
  double guess = 0.5 * 1.0 + 0.5 * ndcg_at_20(2);
  double split = ndcg_at_20(2);
  EXPECT_NEAR(p.guess_value(2, 0), guess, 1e-15);
  EXPECT_NEAR(p.split_value(2, 0), split, 1e-15);
  EXPECT_TRUE(p.should_guess(2, 0));
  EXPECT_NEAR(optimal_expected_ndcg(2), std::max(guess, split), 1e-15);
  EXPECT_FALSE(p.should_guess(157, 0));
  EXPECT_EQ(p.value(5, 20), 0.0);
}

TEST(TwentyQEnv, SolvedRankAndTermination) {
  auto lex = Lexicon::bundled();
  TwentyQuestionsEnv env(lex, "Apple", std::make_shared<ScriptedOracle>(lex));
  EXPECT_EQ(env.ask("Is it alive?"), OracleAnswer::kInvalid);
  EXPECT_EQ(env.ask("Is it a dog?"), OracleAnswer::kNo);
  EXPECT_FALSE(env.terminal());
  EXPECT_EQ(env.ask("Is it an apple?"), OracleAnswer::kYes);
  EXPECT_TRUE(env.terminal());
  EXPECT_EQ(env.state().solved_rank, 3);
  EXPECT_EQ(env.reward(), 0.5);
  EXPECT_FALSE(env.next_request());
  EXPECT_EQ(env.metadata().at("secret"), "Apple");
}

TEST(TwentyQEnv, TurnLimitIsTwenty) {
  auto lex = Lexicon::bundled();
  TwentyQuestionsEnv env(lex, "Apple", std::make_shared<ScriptedOracle>(lex));
  for (int i = 0; i < 20; ++i) {
    auto req = env.next_request();
    ASSERT_TRUE(req);
    EXPECT_EQ(req->action, "question");
    env.apply(*req, "Is it a dog?");
  }
  EXPECT_TRUE(env.terminal());
  EXPECT_EQ(env.state().turn(), 20);
  EXPECT_EQ(env.reward(), 0.0);
}

TEST(TwentyQEnv, StateRenderingHidesSecret) {
  auto lex = Lexicon::bundled();
  TwentyQuestionsEnv env(lex, "Tree", std::make_shared<ScriptedOracle>(lex));
  env.ask("Is it a dog?");
  auto req = env.next_request();
  ASSERT_TRUE(req);
  EXPECT_EQ(req->state_rendering.find("Tree"), std::string::npos);
  EXPECT_NE(req->state_rendering.find("Is it a dog?"), std::string::npos);
  EXPECT_NE(req->rules.find("20"), std::string::npos);
}

TEST(TwentyQEnv, CaseScheduleCoversLexiconPerCycle) {
  auto lex = Lexicon::bundled();
  std::set<std::string> first_cycle;
  for (int i = 0; i < 157; ++i) first_cycle.insert(secret_for_case(*lex, 11, i));
  EXPECT_EQ(first_cycle.size(), 157u);
  EXPECT_EQ(secret_for_case(*lex, 11, 5), secret_for_case(*lex, 11, 5));
  int same = 0;
  for (int i = 0; i < 157; ++i) same += secret_for_case(*lex, 11, i) == secret_for_case(*lex, 12, i);
  EXPECT_LT(same, 20);
}

TEST(Scoring, SolvedRankIsFirstYesIdentityGuess) {
  auto lex = Lexicon::bundled();
  game::EpisodeTranscript t;
  t.metadata["secret"] = "Apple";
  t.turns.push_back({"questioner", "ask", "", "", "Is it one of: Apple, Dog", "Yes"});
  t.turns.push_back({"questioner", "ask", "", "", "Is it a dog?", "No"});
  t.turns.push_back({"questioner", "ask", "", "", "Is it an apple?", "Yes"});
  EXPECT_EQ(solved_rank_of(t, *lex), 3);
  EXPECT_EQ(score_transcript(t, *lex), 0.5);
}
