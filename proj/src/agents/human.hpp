#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <string>

#include "game/episode.hpp"

namespace ttl::agents {

// Hand-off point between a session front end and an engine thread waiting on
// a human seat.
class HumanChannel {
 public:
  void submit(std::string answer);

  // The most recent request the engine is waiting on, if any.
  std::optional<game::ActionRequest> pending() const;

  // Engine side: publishes the request, then blocks for an answer.
  std::optional<std::string> await_answer(const game::ActionRequest& request,
                                          std::chrono::milliseconds timeout);

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> answers_;
  std::optional<game::ActionRequest> pending_;
};

class HumanActor final : public game::Actor {
 public:
  HumanActor(std::shared_ptr<HumanChannel> channel, std::chrono::milliseconds timeout);

  // Wraps the submitted text in answer tags; a timeout is an agent failure.
  std::string respond(const game::ActionRequest& request, const game::Reprompt* reprompt) override;

 private:
  std::shared_ptr<HumanChannel> channel_;
  std::chrono::milliseconds timeout_;
};

}  // namespace ttl::agents
