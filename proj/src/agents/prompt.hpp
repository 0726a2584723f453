#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "experience/records.hpp"
#include "game/episode.hpp"
#include "llm/provider.hpp"

namespace ttl::agents {

enum class AgentKind { kLlm, kScriptedBinary, kScriptedVote, kHuman };

std::string_view agent_kind_name(AgentKind k);

class HumanChannel;

struct AgentSpec {
  AgentKind kind = AgentKind::kLlm;
  std::shared_ptr<llm::Provider> provider;
  game::ConditionSpec condition;
  int reprompt_budget = 1;
  std::shared_ptr<HumanChannel> human;

  // Throws Error(kConfigError).
  void validate() const;
};

// Named policies and experience bundles that conditions refer to.
struct AttachmentStore {
  std::map<std::string, experience::PolicyDocument> policies;
  std::map<std::string, std::vector<experience::ExperienceRecord>> experience;
};

struct PromptBundle {
  std::string instruction;
  std::string policy_section;
  std::string experience_section;
  std::string state_rendering;
  std::string output_contract;

  bool operator==(const PromptBundle&) const = default;
};

// Throws Error(kDanglingAttachment) when the condition names an attachment
// the store does not hold.
PromptBundle assemble_prompt(const AgentSpec& spec, const AttachmentStore& store,
                             const std::string& rules, const std::string& state_rendering,
                             std::string_view action);

PromptBundle assemble_prompt(const AgentSpec& spec, const AttachmentStore& store,
                             const game::ActionRequest& request);

// System message: instruction, policy, experience. User message: state and
// output contract.
llm::Messages to_messages(const PromptBundle& bundle);

std::string render_output_contract(std::string_view action);

}  // namespace ttl::agents
