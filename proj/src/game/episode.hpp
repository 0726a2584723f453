#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "game/answer.hpp"
#include "game/observation.hpp"
#include "game/types.hpp"

namespace ttl::game {

struct ActionRequest {
  std::string actor_id;
  std::string phase;   // recorded on the Turn
  std::string action;  // "question" | "clue" | "vote"
  std::string rules;   // game rules as this seat should read them
  std::string state_rendering;
  Observation observation;
};

struct StepResult {
  bool accepted = true;
  std::string feedback;   // environment reply (accepted)
  std::string rejection;  // why the answer was refused (not accepted)
};

// A game the turn loop can drive. Implementations own their rules; the loop
// only routes requests to actors and answers back.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual EnvironmentId id() const = 0;

  // Next pending action, or nullopt once terminal.
  virtual std::optional<ActionRequest> next_request() = 0;

  // Feeds a parsed answer. May throw Error(kOracleFailure).
  virtual StepResult apply(const ActionRequest& request, const std::string& answer) = 0;

  // Records that the seat forfeits the pending action.
  virtual void abstain(const ActionRequest& request) = 0;

  virtual bool terminal() const = 0;

  // Reward of the evaluated seat; only meaningful once terminal.
  virtual double reward() const = 0;

  virtual std::map<std::string, std::string> metadata() const = 0;
};

struct Reprompt {
  std::string previous_response;
  std::string reminder;
};

class Actor {
 public:
  virtual ~Actor() = default;

  // Raw output for one action; `reprompt` is set on retries.
  virtual std::string respond(const ActionRequest& request, const Reprompt* reprompt) = 0;

  virtual int reprompt_budget() const { return 1; }
};

using ActorTable = std::map<std::string, Actor*>;

struct EpisodeContext {
  std::string episode_id;
  ConditionSpec condition;
  std::int64_t case_index = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> metadata;
};

struct Attempt {
  std::string raw;
  ParsedAnswer parsed;
};

using AskFn = std::function<std::string(const Reprompt*)>;

// Calls `ask`, reprompting with a tag reminder up to `budget` times while the
// reply lacks a usable answer pair. Throws Error(kAgentFailure) afterwards.
Attempt act_with_reprompts(const AskFn& ask, int budget, std::string_view action);

std::string tag_reminder(std::string_view action);

// Drives `env` to termination. Agent and oracle failures end the episode with
// reward 0 and metadata failed=true; provider errors propagate with the
// episode id prepended.
EpisodeTranscript run_episode(Environment& env, const ActorTable& actors,
                              const EpisodeContext& ctx);

}  // namespace ttl::game
