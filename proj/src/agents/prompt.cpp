#include "agents/prompt.hpp"

#include "agents/human.hpp"
#include "util/assets.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::agents {

std::string_view agent_kind_name(AgentKind k) {
  switch (k) {
    case AgentKind::kLlm: return "llm";
    case AgentKind::kScriptedBinary: return "scripted_binary";
    case AgentKind::kScriptedVote: return "scripted_vote";
    case AgentKind::kHuman: return "human";
  }
  return "llm";
}

void AgentSpec::validate() const {
  if (kind == AgentKind::kLlm && !provider) {
    throw Error(ErrorCode::kConfigError, "llm agent requires a provider");
  }
  if (kind == AgentKind::kHuman && !human) {
    throw Error(ErrorCode::kConfigError, "human agent requires a session binding");
  }
  if (reprompt_budget < 0) {
    throw Error(ErrorCode::kConfigError, "reprompt_budget must be non-negative");
  }
  condition.validate();
}

std::string render_output_contract(std::string_view action) {
  return text::render(assets::get("templates/output_contract.txt"),
                      {{"action", std::string(action)}});
}

PromptBundle assemble_prompt(const AgentSpec& spec, const AttachmentStore& store,
                             const std::string& rules, const std::string& state_rendering,
                             std::string_view action) {
  PromptBundle b;
  b.instruction = text::trim(rules);
  b.state_rendering = state_rendering;
  b.output_contract = render_output_contract(action);

  const auto& c = spec.condition;
  switch (c.kind) {
    case game::ConditionKind::kBaseline:
      break;
    case game::ConditionKind::kRulePolicy:
    case game::ConditionKind::kExperiencePolicy:
    case game::ConditionKind::kHumanPolicy: {
      auto it = store.policies.find(c.attachment);
      if (it == store.policies.end()) {
        throw Error(ErrorCode::kDanglingAttachment, "no policy named '" + c.attachment + "'");
      }
      b.policy_section = text::render(assets::get("templates/policy_section.txt"),
                                      {{"policy", it->second.text}});
      break;
    }
    case game::ConditionKind::kFullExperience: {
      auto it = store.experience.find(c.attachment);
      if (it == store.experience.end()) {
        throw Error(ErrorCode::kDanglingAttachment,
                    "no experience bundle named '" + c.attachment + "'");
      }
      b.experience_section = experience::render_experience_section(it->second);
      break;
    }
  }
  return b;
}

PromptBundle assemble_prompt(const AgentSpec& spec, const AttachmentStore& store,
                             const game::ActionRequest& request) {
  return assemble_prompt(spec, store, request.rules, request.state_rendering, request.action);
}

llm::Messages to_messages(const PromptBundle& bundle) {
  std::string system = bundle.instruction;
  for (const std::string* s : {&bundle.policy_section, &bundle.experience_section}) {
    if (!s->empty()) system += "\n\n" + *s;
  }
  return {{"system", system}, {"user", bundle.state_rendering + "\n\n" + bundle.output_contract}};
}

}  // namespace ttl::agents
