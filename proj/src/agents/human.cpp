#include "agents/human.hpp"

#include "game/answer.hpp"
#include "util/error.hpp"

namespace ttl::agents {

void HumanChannel::submit(std::string answer) {
  {
    std::lock_guard lock(mu_);
    answers_.push_back(std::move(answer));
  }
  cv_.notify_all();
}

std::optional<game::ActionRequest> HumanChannel::pending() const {
  std::lock_guard lock(mu_);
  return pending_;
}

std::optional<std::string> HumanChannel::await_answer(const game::ActionRequest& request,
                                                      std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  pending_ = request;
  if (!cv_.wait_for(lock, timeout, [&] { return !answers_.empty(); })) {
    pending_.reset();
    return std::nullopt;
  }
  std::string a = std::move(answers_.front());
  answers_.pop_front();
  pending_.reset();
  return a;
}

HumanActor::HumanActor(std::shared_ptr<HumanChannel> channel, std::chrono::milliseconds timeout)
    : channel_(std::move(channel)), timeout_(timeout) {
  if (!channel_) throw Error(ErrorCode::kConfigError, "human agent requires a session binding");
}

std::string HumanActor::respond(const game::ActionRequest& request, const game::Reprompt*) {
  auto answer = channel_->await_answer(request, timeout_);
  if (!answer) {
    throw Error(ErrorCode::kAgentFailure, "no answer from the human seat before the timeout");
  }
  return game::wrap_answer(*answer);
}

}  // namespace ttl::agents
