#include "llm/rate_limiter.hpp"

#include <algorithm>

#include "util/error.hpp"

namespace ttl::llm {

RateLimiter::RateLimiter(int requests_per_minute, Clock& clock)
    : clock_(clock), interval_(0) {
  if (requests_per_minute <= 0) {
    throw Error(ErrorCode::kConfigError, "rate_limit: must be positive");
  }
  interval_ = Millis(60000 / requests_per_minute);
}

Millis RateLimiter::acquire() {
  Millis slot;
  {
    std::lock_guard lock(mu_);
    Millis now = clock_.now();
    slot = first_ ? now : std::max(now, next_slot_);
    first_ = false;
    next_slot_ = slot + interval_;
  }
  clock_.sleep_until(slot);
  return slot;
}

}  // namespace ttl::llm
