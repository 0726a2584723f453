#pragma once

#include <memory>
#include <string>

#include "agents/prompt.hpp"
#include "game/episode.hpp"

namespace ttl::agents {

// One tagged exchange: sends `messages`, reprompting with a tag reminder up
// to `budget` times. A provider that stays unavailable after its own
// retries becomes Error(kAgentFailure); auth errors and refusals propagate.
game::Attempt complete_tagged(llm::Provider& provider, llm::Messages messages, int budget,
                              std::string_view action);

// Runs one action for an LLM agent and returns the recorded turn.
game::Turn llm_agent_act(const AgentSpec& spec, const PromptBundle& bundle,
                         std::string_view action);

class LlmActor final : public game::Actor {
 public:
  LlmActor(AgentSpec spec, std::shared_ptr<const AttachmentStore> store);

  std::string respond(const game::ActionRequest& request, const game::Reprompt* reprompt) override;
  int reprompt_budget() const override { return spec_.reprompt_budget; }

  const AgentSpec& spec() const { return spec_; }

 private:
  AgentSpec spec_;
  std::shared_ptr<const AttachmentStore> store_;
};

}  // namespace ttl::agents
