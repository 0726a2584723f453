#pragma once

#include <mutex>

#include "util/clock.hpp"

namespace ttl::llm {

// Spaces request start times at least 60s/rate apart. Callers wait for their
// slot instead of being rejected. One instance per provider.
class RateLimiter {
 public:
  RateLimiter(int requests_per_minute, Clock& clock);

  // Blocks (on `clock`) until the caller's slot; returns the slot time.
  Millis acquire();

  Millis interval() const { return interval_; }

 private:
  std::mutex mu_;
  Clock& clock_;
  Millis interval_;
  Millis next_slot_{0};
  bool first_ = true;
};

}  // namespace ttl::llm
