#include <gtest/gtest.h>

#include "agents/scripted.hpp"
#include "game/answer.hpp"
#include "game/episode.hpp"
#include "game/seed.hpp"
#include "twentyq/env.hpp"
#include "twentyq/scoring.hpp"
#include "util/error.hpp"
#include "util/rng.hpp"
#include "util/text.hpp"

using namespace ttl;
using namespace ttl::game;

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

// Replies from a fixed queue, whatever the request.
class QueueActor : public Actor {
 public:
  explicit QueueActor(std::vector<std::string> replies, int budget = 1)
      : replies_(std::move(replies)), budget_(budget) {}
  std::string respond(const ActionRequest&, const Reprompt* r) override {
    if (r) ++reprompts;
    if (next_ >= replies_.size()) throw Error(ErrorCode::kScriptExhausted, "queue empty");
    return replies_[next_++];
  }
  int reprompt_budget() const override { return budget_; }
  int reprompts = 0;

 private:
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
  int budget_;
};

std::unique_ptr<twentyq::TwentyQuestionsEnv> apple_env() {
  auto lex = twentyq::Lexicon::bundled();
  return std::make_unique<twentyq::TwentyQuestionsEnv>(
      lex, "Apple", std::make_shared<twentyq::ScriptedOracle>(lex));
}

EpisodeContext ctx(const std::string& id = "e1") {
  EpisodeContext c;
  c.episode_id = id;
  c.case_index = 3;
  c.seed = 99;
  return c;
}

}  // namespace

TEST(ParseAnswer, Examples) {
  EXPECT_EQ(parse_answer("I think... <answer>Is it alive?</answer>").answer, "Is it alive?");
  EXPECT_EQ(parse_answer("I think... <answer>Is it alive?</answer>").reasoning, "I think...");
  EXPECT_EQ(parse_answer("<answer>A</answer> then <answer>B</answer>").answer, "B");
  EXPECT_EQ(parse_answer("<ANSWER>  x  </Answer>").answer, "x");
  EXPECT_EQ(code_of([] { parse_answer("no tags here"); }), ErrorCode::kMissingAnswerTags);
  EXPECT_EQ(code_of([] { parse_answer("<answer>   </answer>"); }), ErrorCode::kEmptyAnswer);
  EXPECT_EQ(code_of([] { parse_answer("</answer> <answer>"); }), ErrorCode::kMissingAnswerTags);
}

TEST(ParseAnswer, WrapRoundTripProperty) {
  Rng rng(5);
  const std::string alphabet = "abcXYZ 0129?!.,<>/\n";
  for (int i = 0; i < 2000; ++i) {
    std::string a;
    int len = 1 + static_cast<int>(rng.below(30));
    for (int k = 0; k < len; ++k) a += alphabet[rng.below(alphabet.size())];
    std::string trimmed = text::trim(a);
    if (trimmed.empty()) continue;
    if (text::to_lower(a).find("<answer>") != std::string::npos ||
        text::to_lower(a).find("</answer>") != std::string::npos) {
      continue;
    }
    EXPECT_EQ(parse_answer(wrap_answer(trimmed)).answer, trimmed);
  }
}

TEST(Transcript, JsonRoundTrip) {
  EpisodeTranscript t;
  t.episode_id = "fixed/baseline/c4";
  t.environment = EnvironmentId::kUndercover;
  t.condition = {ConditionKind::kRulePolicy, "rule_policy"};
  t.case_index = 4;
  t.turns.push_back({"P1", "speak:1", "raw <answer>x</answer>", "raw", "x", ""});
  t.turns.push_back({"P2", "vote:1", "<answer>P1</answer>", "", "P1", "accepted"});
  t.set_reward(1.0);
  t.seed = 0xFFFFFFFFFFFFFFFFULL;
  t.metadata["model"] = "mock";
  auto back = transcript_from_json_line(to_json_line(t));
  EXPECT_EQ(back, t);
  EXPECT_EQ(to_json_line(back), to_json_line(t));
}

TEST(Transcript, SchemaAndCorruption) {
  EXPECT_EQ(code_of([] { transcript_from_json_line("{\"schema\": 99}"); }),
            ErrorCode::kSchemaVersionMismatch);
  EXPECT_EQ(code_of([] { transcript_from_json_line("{\"episode_id\": "); }),
            ErrorCode::kCorruptLog);
  EXPECT_EQ(code_of([] { transcript_from_json_line("{\"schema\": 1}"); }), ErrorCode::kCorruptLog);
}

TEST(Transcript, RewardSetOnceWithinUnitInterval) {
  EpisodeTranscript t;
  EXPECT_EQ(code_of([&] { t.set_reward(1.5); }), ErrorCode::kInvalidArgument);
  t.set_reward(0.5);
  EXPECT_EQ(code_of([&] { t.set_reward(0.5); }), ErrorCode::kInvalidArgument);
}

TEST(Transcript, ValidateFlagsTurnViolations) {
  EpisodeTranscript t;
  t.turns.push_back({"a", "ask", "r", "", "<answer>x</answer>", ""});
  t.set_reward(0.0);
  EXPECT_TRUE(validate_transcript(t).has_value());
  t.turns[0].answer = "x";
  EXPECT_FALSE(validate_transcript(t).has_value());
  t.turns[0].answer = "";
  EXPECT_TRUE(validate_transcript(t).has_value());
}

TEST(Condition, AttachmentRule) {
  EXPECT_NO_THROW(ConditionSpec::baseline().validate());
  EXPECT_THROW((ConditionSpec{ConditionKind::kBaseline, "x"}.validate()), Error);
  EXPECT_THROW((ConditionSpec{ConditionKind::kHumanPolicy, ""}.validate()), Error);
  for (auto k : kAllConditions) EXPECT_EQ(parse_condition(condition_name(k)), k);
  EXPECT_EQ(code_of([] { parse_condition("nope"); }), ErrorCode::kConfigError);
}

TEST(Seeds, ConditionIndependentAndDistinct) {
  auto a = derive_seed(1, EnvironmentId::kTwentyQ, 0);
  EXPECT_EQ(a, derive_seed(1, EnvironmentId::kTwentyQ, 0));
  EXPECT_NE(a, derive_seed(1, EnvironmentId::kTwentyQ, 1));
  EXPECT_NE(a, derive_seed(1, EnvironmentId::kUndercover, 0));
  EXPECT_NE(a, derive_seed(2, EnvironmentId::kTwentyQ, 0));
  EXPECT_NE(derive_seed(a, "x", 0), derive_seed(a, "y", 0));
}

TEST(RunEpisode, FirstAnswerIdentityGuessScoresOne) {
  auto env = apple_env();
  QueueActor actor({"<answer>Is it an apple?</answer>"});
  auto t = run_episode(*env, {{"questioner", &actor}}, ctx());
  ASSERT_TRUE(t.reward);
  EXPECT_EQ(*t.reward, 1.0);
  ASSERT_EQ(t.turns.size(), 1u);
  EXPECT_EQ(t.turns[0].feedback, "Yes");
  EXPECT_EQ(t.case_index, 3);
  EXPECT_EQ(t.seed, 99u);
  EXPECT_FALSE(validate_transcript(t));
}

TEST(RunEpisode, TaglessTwiceIsAgentFailureWithZeroReward) {
  auto env = apple_env();
  QueueActor actor({"no tags", "still none"});
  auto t = run_episode(*env, {{"questioner", &actor}}, ctx());
  EXPECT_EQ(actor.reprompts, 1);
  EXPECT_TRUE(t.failed());
  EXPECT_EQ(*t.reward, 0.0);
  EXPECT_NE(t.meta("failure").find("AgentFailure"), std::string::npos);
  EXPECT_TRUE(t.turns.empty());
}

TEST(RunEpisode, OneRepromptSucceeds) {
  auto env = apple_env();
  QueueActor actor({"forgot tags", "<answer>Is it Apple?</answer>"});
  auto t = run_episode(*env, {{"questioner", &actor}}, ctx());
  EXPECT_FALSE(t.failed());
  EXPECT_EQ(*t.reward, 1.0);
  EXPECT_EQ(t.turns[0].raw_response, "<answer>Is it Apple?</answer>");
}

TEST(RunEpisode, ProviderErrorsPropagateWithEpisodeContext) {
  auto env = apple_env();
  QueueActor actor({});
  try {
    run_episode(*env, {{"questioner", &actor}}, ctx("ep-x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kScriptExhausted);
    EXPECT_NE(std::string(e.what()).find("ep-x"), std::string::npos);
  }
}

TEST(RunEpisode, UnsolvedAfterTwentyQuestions) {
  auto env = apple_env();
  std::vector<std::string> replies(20, "<answer>Is it a dog?</answer>");
  QueueActor actor(replies);
  auto t = run_episode(*env, {{"questioner", &actor}}, ctx());
  EXPECT_EQ(t.turns.size(), 20u);
  EXPECT_EQ(*t.reward, 0.0);
  EXPECT_FALSE(t.failed());
}

TEST(RunEpisode, ScriptedRunsAreByteIdentical) {
  auto lex = twentyq::Lexicon::bundled();
  auto once = [&] {
    auto env = std::make_unique<twentyq::TwentyQuestionsEnv>(
        lex, lex->at(100), std::make_shared<twentyq::ScriptedOracle>(lex));
    agents::ScriptedBinaryActor actor(lex);
    return to_json_line(run_episode(*env, {{"questioner", &actor}}, ctx()));
  };
  EXPECT_EQ(once(), once());
}

TEST(RunEpisode, StoredTranscriptRescoresExactly) {
  auto lex = twentyq::Lexicon::bundled();
  for (std::size_t i = 0; i < lex->size(); i += 13) {
    twentyq::TwentyQuestionsEnv env(lex, lex->at(i), std::make_shared<twentyq::ScriptedOracle>(lex));
    agents::ScriptedBinaryActor actor(lex);
    auto t = run_episode(env, {{"questioner", &actor}}, ctx());
    auto back = transcript_from_json_line(to_json_line(t));
    EXPECT_EQ(twentyq::score_transcript(back, *lex), *t.reward);
  }
}

TEST(RunEpisode, MissingSeatIsAnError) {
  auto env = apple_env();
  EXPECT_THROW(run_episode(*env, {}, ctx()), Error);
}
