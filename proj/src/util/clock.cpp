#include "util/clock.hpp"

#include <thread>

namespace ttl {

Millis SystemClock::now() {
  return std::chrono::duration_cast<Millis>(
      std::chrono::steady_clock::now().time_since_epoch());
}

void SystemClock::sleep_for(Millis duration) {
  if (duration.count() > 0) std::this_thread::sleep_for(duration);
}

SystemClock& system_clock() {
  static SystemClock clock;
  return clock;
}

Millis VirtualClock::now() {
  std::lock_guard lock(mu_);
  return now_;
}

void VirtualClock::sleep_for(Millis duration) { advance(duration); }

void VirtualClock::sleep_until(Millis deadline) {
  std::lock_guard lock(mu_);
  if (deadline > now_) now_ = deadline;
}

void VirtualClock::advance(Millis duration) {
  std::lock_guard lock(mu_);
  if (duration.count() > 0) now_ += duration;
}

}  // namespace ttl
