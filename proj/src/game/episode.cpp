#include "game/episode.hpp"

#include "util/assets.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::game {

namespace {

constexpr int kMaxSteps = 10000;

std::string rejection_reminder(std::string_view action, const std::string& reason) {
  return text::render(assets::get("templates/reprompt_rejected.txt"),
                      {{"action", std::string(action)}, {"reason", reason}});
}

}  // namespace

std::string tag_reminder(std::string_view action) {
  return text::render(assets::get("templates/reprompt_tags.txt"),
                      {{"action", std::string(action)}});
}

Attempt act_with_reprompts(const AskFn& ask, int budget, std::string_view action) {
  Reprompt reprompt;
  std::string last_error;
  for (int attempt = 0; attempt <= budget; ++attempt) {
    std::string raw = ask(attempt == 0 ? nullptr : &reprompt);
    try {
      return {raw, parse_answer(raw)};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMissingAnswerTags && e.code() != ErrorCode::kEmptyAnswer) {
        throw;
      }
      last_error = std::string(error_code_name(e.code()));
      reprompt.previous_response = std::move(raw);
      reprompt.reminder = tag_reminder(action);
    }
  }
  throw Error(ErrorCode::kAgentFailure,
              "no usable answer after " + std::to_string(budget) +
                  " reprompt(s) (" + last_error + ")");
}

EpisodeTranscript run_episode(Environment& env, const ActorTable& actors,
                              const EpisodeContext& ctx) {
  ctx.condition.validate();
  EpisodeTranscript t;
  t.episode_id = ctx.episode_id;
  t.environment = env.id();
  t.condition = ctx.condition;
  t.case_index = ctx.case_index;
  t.seed = ctx.seed;

  std::string failure;
  try {
    int steps = 0;
    while (auto request = env.next_request()) {
      if (++steps > kMaxSteps) {
        throw Error(ErrorCode::kInvalidArgument, "environment did not terminate");
      }
      auto it = actors.find(request->actor_id);
      if (it == actors.end() || it->second == nullptr) {
        throw Error(ErrorCode::kInvalidArgument,
                    "no actor bound to seat " + request->actor_id);
      }
      Actor& actor = *it->second;
      auto ask = [&](const Reprompt* r) { return actor.respond(*request, r); };

      Attempt attempt = act_with_reprompts(ask, actor.reprompt_budget(), request->action);
      StepResult result = env.apply(*request, attempt.parsed.answer);
      if (!result.accepted) {
        // One reprompt for a refused action, then the seat abstains.
        Reprompt again{attempt.raw, rejection_reminder(request->action, result.rejection)};
        std::string raw = actor.respond(*request, &again);
        bool retried = false;
        try {
          attempt = {raw, parse_answer(raw)};
          retried = true;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kMissingAnswerTags &&
              e.code() != ErrorCode::kEmptyAnswer) {
            throw;
          }
        }
        if (retried) result = env.apply(*request, attempt.parsed.answer);
        if (!retried || !result.accepted) {
          env.abstain(*request);
          continue;
        }
      }
      t.turns.push_back({request->actor_id, request->phase, attempt.raw,
                         attempt.parsed.reasoning, attempt.parsed.answer,
                         result.feedback});
    }
  } catch (const Error& e) {
    if (is_provider_error(e.code())) {
      throw Error(e.code(), "episode " + ctx.episode_id + ": " + e.what());
    }
    if (e.code() != ErrorCode::kAgentFailure && e.code() != ErrorCode::kOracleFailure) {
      throw;
    }
    failure = std::string(error_code_name(e.code())) + ": " + e.what();
  }

  for (const auto& [k, v] : env.metadata()) t.metadata[k] = v;
  for (const auto& [k, v] : ctx.metadata) t.metadata[k] = v;
  if (!failure.empty()) {
    t.metadata["failed"] = "true";
    t.metadata["failure"] = failure;
    t.set_reward(0.0);
  } else {
    t.set_reward(env.reward());
  }
  return t;
}

}  // namespace ttl::game
