#include "agents/llm_actor.hpp"

#include "util/error.hpp"

namespace ttl::agents {

namespace {

std::string call(llm::Provider& provider, const llm::Messages& messages) {
  try {
    return provider.complete(messages).text;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kProviderUnavailable) {
      throw Error(ErrorCode::kAgentFailure, std::string("provider unavailable: ") + e.what());
    }
    throw;
  }
}

llm::Messages with_reprompt(llm::Messages messages, const game::Reprompt* r) {
  if (r) {
    messages.push_back({"assistant", r->previous_response});
    messages.push_back({"user", r->reminder});
  }
  return messages;
}

}  // namespace

game::Attempt complete_tagged(llm::Provider& provider, llm::Messages messages, int budget,
                              std::string_view action) {
  return game::act_with_reprompts(
      [&](const game::Reprompt* r) { return call(provider, with_reprompt(messages, r)); },
      budget, action);
}

game::Turn llm_agent_act(const AgentSpec& spec, const PromptBundle& bundle,
                         std::string_view action) {
  spec.validate();
  if (!spec.provider) throw Error(ErrorCode::kConfigError, "llm agent requires a provider");
  game::Attempt a =
      complete_tagged(*spec.provider, to_messages(bundle), spec.reprompt_budget, action);
  game::Turn t;
  t.raw_response = a.raw;
  t.reasoning = a.parsed.reasoning;
  t.answer = a.parsed.answer;
  return t;
}

LlmActor::LlmActor(AgentSpec spec, std::shared_ptr<const AttachmentStore> store)
    : spec_(std::move(spec)), store_(std::move(store)) {
  if (!store_) store_ = std::make_shared<const AttachmentStore>();
  spec_.validate();
  if (spec_.kind != AgentKind::kLlm) {
    throw Error(ErrorCode::kConfigError, "LlmActor needs an llm agent spec");
  }
}

std::string LlmActor::respond(const game::ActionRequest& request, const game::Reprompt* reprompt) {
  PromptBundle bundle = assemble_prompt(spec_, *store_, request);
  return call(*spec_.provider, with_reprompt(to_messages(bundle), reprompt));
}

}  // namespace ttl::agents
