#include <gtest/gtest.h>

#include <set>
#include <thread>

#include "agents/human.hpp"
#include "agents/llm_actor.hpp"
#include "agents/prompt.hpp"
#include "agents/scripted.hpp"
#include "experience/learning.hpp"
#include "llm/chat_client.hpp"
#include "llm/errors.hpp"
#include "llm/mock.hpp"
#include "twentyq/env.hpp"
#include "twentyq/scoring.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

using namespace ttl;
using namespace ttl::agents;
using game::ConditionKind;

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

AgentSpec spec_for(ConditionKind kind, const std::string& attachment = "") {
  AgentSpec s;
  s.provider = llm::mock_provider(llm::MockScript::sequence({"<answer>x</answer>"}));
  s.condition = {kind, attachment};
  return s;
}

experience::ExperienceRecord fixture_record(int i) {
  game::EpisodeTranscript t;
  t.episode_id = "fixed/experience/c" + std::to_string(i);
  t.case_index = i;
  t.metadata["secret"] = "Apple";
  t.turns.push_back({"questioner", "ask", "", "", "Is it alive?", "No"});
  t.turns.push_back({"questioner", "ask", "", "", "Is it an apple?", "Yes"});
  t.set_reward(twentyq::ndcg_at_20(2));
  return experience::make_record(t, "reflection number " + std::to_string(i));
}

AttachmentStore store_with_everything() {
  AttachmentStore store;
  store.policies["rule_policy"] =
      experience::make_policy("rule_policy", "Ask broad questions first.", experience::Provenance::kRuleOnly);
  store.policies["human_policy"] = experience::bundled_human_policy(game::EnvironmentId::kTwentyQ);
  std::vector<experience::ExperienceRecord> records;
  for (int i = 0; i < 5; ++i) records.push_back(fixture_record(i));
  store.experience["fixed/experience"] = records;
  return store;
}

game::TwentyQView view_with(std::vector<game::QA> history) {
  game::TwentyQView v;
  v.history = std::move(history);
  return v;
}

class AlwaysDown : public llm::Transport {
 public:
  llm::ChatResponse send(const llm::ChatRequest&) override { throw llm::TransientFailure("timeout"); }
};

}  // namespace

TEST(AssemblePrompt, SectionsPerCondition) {
  auto store = store_with_everything();
  const auto rules = twentyq::rules_text();
  auto base = assemble_prompt(spec_for(ConditionKind::kBaseline), store, rules, "state", "question");
  EXPECT_TRUE(base.policy_section.empty());
  EXPECT_TRUE(base.experience_section.empty());
  EXPECT_EQ(base.instruction, text::trim(rules));

  auto pol = assemble_prompt(spec_for(ConditionKind::kRulePolicy, "rule_policy"), store, rules, "state",
                             "question");
  EXPECT_NE(pol.policy_section.find("Ask broad questions first."), std::string::npos);
  EXPECT_TRUE(pol.experience_section.empty());

  auto full = assemble_prompt(spec_for(ConditionKind::kFullExperience, "fixed/experience"), store, rules,
                              "state", "question");
  EXPECT_TRUE(full.policy_section.empty());
  std::size_t last = 0;
  for (int i = 1; i <= 5; ++i) {
    auto pos = full.experience_section.find("=== Game " + std::to_string(i) + " ===");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_GE(pos, last);
    last = pos;
    EXPECT_NE(full.experience_section.find("reflection number " + std::to_string(i - 1)),
              std::string::npos);
  }
  EXPECT_EQ(full.experience_section.find("=== Game 6 ==="), std::string::npos);
}

TEST(AssemblePrompt, RulesVerbatimInEveryConditionAndPure) {
  auto store = store_with_everything();
  const auto rules = twentyq::rules_text();
  const std::pair<ConditionKind, std::string> conds[] = {
      {ConditionKind::kBaseline, ""},
      {ConditionKind::kFullExperience, "fixed/experience"},
      {ConditionKind::kRulePolicy, "rule_policy"},
      {ConditionKind::kExperiencePolicy, "rule_policy"},
      {ConditionKind::kHumanPolicy, "human_policy"}};
  for (const auto& [kind, att] : conds) {
    auto spec = spec_for(kind, att);
    auto a = assemble_prompt(spec, store, rules, "s", "question");
    EXPECT_EQ(a, assemble_prompt(spec, store, rules, "s", "question"));
    auto msgs = to_messages(a);
    ASSERT_EQ(msgs.size(), 2u);
    EXPECT_NE(msgs[0].content.find(text::trim(rules)), std::string::npos);
    EXPECT_NE(msgs[1].content.find("<answer>"), std::string::npos);
  }
}

TEST(AssemblePrompt, SectionOrderInSystemMessage) {
  auto store = store_with_everything();
  auto b = assemble_prompt(spec_for(ConditionKind::kHumanPolicy, "human_policy"), store, "RULES", "STATE",
                           "question");
  b.experience_section = "EXPERIENCE";
  auto msgs = to_messages(b);
  auto r = msgs[0].content.find("RULES");
  auto p = msgs[0].content.find("Start Board");
  auto e = msgs[0].content.find("EXPERIENCE");
  EXPECT_LT(r, p);
  EXPECT_LT(p, e);
  EXPECT_LT(msgs[1].content.find("STATE"), msgs[1].content.find(b.output_contract));
}

TEST(AssemblePrompt, DanglingAttachment) {
  AttachmentStore empty;
  EXPECT_EQ(code_of([&] {
              assemble_prompt(spec_for(ConditionKind::kRulePolicy, "missing"), empty, "r", "s", "question");
            }),
            ErrorCode::kDanglingAttachment);
  EXPECT_EQ(code_of([&] {
              assemble_prompt(spec_for(ConditionKind::kFullExperience, "missing"), empty, "r", "s",
                              "question");
            }),
            ErrorCode::kDanglingAttachment);
}

TEST(AgentSpec, Validation) {
  AgentSpec s;
  EXPECT_EQ(code_of([&] { s.validate(); }), ErrorCode::kConfigError);
  s.kind = AgentKind::kHuman;
  EXPECT_EQ(code_of([&] { s.validate(); }), ErrorCode::kConfigError);
  s.kind = AgentKind::kScriptedBinary;
  EXPECT_NO_THROW(s.validate());
}

TEST(ScriptedBinary, OpeningSplitsFirstSeventyNine) {
  auto lex = twentyq::Lexicon::bundled();
  auto q = scripted_binary_agent_act(view_with({}), *lex, twentyq::standard_planner());
  auto members = twentyq::parse_membership_question(q, *lex);
  ASSERT_TRUE(members);
  ASSERT_EQ(members->size(), 79u);
  for (std::size_t i = 0; i < 79; ++i) EXPECT_EQ((*members)[i], lex->at(i));
}

TEST(ScriptedBinary, SmallSetsGuessFirstCandidate) {
  auto lex = twentyq::Lexicon::from_text("Apple\nBanana\nCherry\n");
  auto shared = std::make_shared<twentyq::Lexicon>(lex);
  twentyq::OptimalPlanner planner(3);
  // One left after a No on Apple/Banana membership.
  auto one = view_with({{twentyq::membership_question({"Apple", "Banana"}), "No"}});
  EXPECT_EQ(twentyq::classify_identity_guess(scripted_binary_agent_act(one, lex, planner), lex), "Cherry");
  auto two = view_with({{twentyq::membership_question({"Apple", "Banana"}), "Yes"}});
  EXPECT_TRUE(planner.should_guess(2, 1));
  EXPECT_EQ(twentyq::classify_identity_guess(scripted_binary_agent_act(two, lex, planner), lex), "Apple");
}

TEST(ScriptedBinary, InconsistentHistory) {
  auto lex = twentyq::Lexicon::bundled();
  auto v = view_with({{twentyq::membership_question({"Apple"}), "Yes"}, {"Is it an apple?", "No"}});
  EXPECT_TRUE(consistent_candidates(v.history, *lex).empty());
  EXPECT_EQ(code_of([&] { scripted_binary_agent_act(v, *lex, twentyq::standard_planner()); }),
            ErrorCode::kInconsistentHistory);
}

TEST(ScriptedBinary, NeverRepeatsOrAsksAboutEliminatedCandidates) {
  auto lex = twentyq::Lexicon::bundled();
  for (const auto& secret : lex->words()) {
    twentyq::TwentyQuestionsEnv env(lex, secret, std::make_shared<twentyq::ScriptedOracle>(lex));
    std::set<std::string> asked;
    while (!env.terminal()) {
      auto before = consistent_candidates(env.state().history, *lex);
      std::set<std::string> live(before.begin(), before.end());
      auto q = scripted_binary_agent_act(view_with(env.state().history), *lex, twentyq::standard_planner());
      EXPECT_TRUE(asked.insert(q).second) << q;
      if (auto m = twentyq::parse_membership_question(q, *lex)) {
        for (const auto& w : *m) EXPECT_TRUE(live.count(w)) << w;
      } else {
        auto g = twentyq::classify_identity_guess(q, *lex);
        ASSERT_TRUE(g);
        EXPECT_TRUE(live.count(*g));
      }
      env.ask(q);
    }
    EXPECT_TRUE(env.state().solved_rank.has_value()) << secret;
  }
}

TEST(LlmAgent, TaggedReplyBecomesTurn) {
  AgentSpec s = spec_for(ConditionKind::kBaseline);
  s.provider = llm::mock_provider(llm::MockScript::sequence({"Hmm. <answer>It is round.</answer>"}));
  auto turn = llm_agent_act(s, PromptBundle{"rules", "", "", "state", "contract"}, "clue");
  EXPECT_EQ(turn.answer, "It is round.");
  EXPECT_EQ(turn.reasoning, "Hmm.");
}

TEST(LlmAgent, OneRepromptOnTaglessReply) {
  auto t = std::make_shared<llm::MockTransport>(
      llm::MockScript::sequence({"no tags", "<answer>P2</answer>"}));
  AgentSpec s = spec_for(ConditionKind::kBaseline);
  s.provider = llm::mock_provider(t);
  auto turn = llm_agent_act(s, PromptBundle{"rules", "", "", "state", "contract"}, "vote");
  EXPECT_EQ(turn.answer, "P2");
  auto reqs = t->requests();
  ASSERT_EQ(reqs.size(), 2u);
  EXPECT_GT(reqs[1].messages.size(), reqs[0].messages.size());
  EXPECT_EQ(reqs[1].messages.back().role, "user");
}

TEST(LlmAgent, BudgetExhaustedIsAgentFailure) {
  AgentSpec s = spec_for(ConditionKind::kBaseline);
  s.provider = llm::mock_provider(llm::MockScript::sequence({"a", "b", "c"}));
  EXPECT_EQ(code_of([&] { llm_agent_act(s, PromptBundle{"r", "", "", "s", "c"}, "clue"); }),
            ErrorCode::kAgentFailure);
}

TEST(LlmAgent, ProviderTimeoutBeyondRetriesIsAgentFailure) {
  VirtualClock clock;
  llm::ProviderConfig cfg;
  cfg.retry.max_attempts = 2;
  AgentSpec s = spec_for(ConditionKind::kBaseline);
  s.provider = std::make_shared<llm::ChatClient>(cfg, std::make_shared<AlwaysDown>(), nullptr, nullptr,
                                                 &clock);
  EXPECT_EQ(code_of([&] { llm_agent_act(s, PromptBundle{"r", "", "", "s", "c"}, "clue"); }),
            ErrorCode::kAgentFailure);
}

TEST(LlmAgent, RequestUsesConfiguredTemperature) {
  auto t = std::make_shared<llm::MockTransport>(llm::MockScript::sequence({"<answer>a</answer>"}));
  AgentSpec s = spec_for(ConditionKind::kBaseline);
  s.provider = llm::mock_provider(t);
  llm_agent_act(s, PromptBundle{"r", "", "", "s", "c"}, "clue");
  EXPECT_EQ(t->requests().at(0).temperature, 1.0);
}

TEST(Human, ChannelDeliversAnswerAndTimesOut) {
  auto ch = std::make_shared<HumanChannel>();
  HumanActor actor(ch, std::chrono::milliseconds(2000));
  game::ActionRequest req;
  req.actor_id = "human";
  req.action = "question";
  std::thread th([&] {
    while (!ch->pending()) std::this_thread::sleep_for(std::chrono::milliseconds(1));
    ch->submit("Is it an apple?");
  });
  EXPECT_EQ(actor.respond(req, nullptr), "<answer>Is it an apple?</answer>");
  th.join();
  HumanActor quick(ch, std::chrono::milliseconds(10));
  EXPECT_EQ(code_of([&] { quick.respond(req, nullptr); }), ErrorCode::kAgentFailure);
}

TEST(ScriptedVote, CluesMatchForSameWordAndVotesAreValid) {
  EXPECT_EQ(ScriptedUndercoverActor::clue_for("milk"), ScriptedUndercoverActor::clue_for("Milk"));
  EXPECT_NE(ScriptedUndercoverActor::clue_for("milk"), ScriptedUndercoverActor::clue_for("soymilk"));
}
