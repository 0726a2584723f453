#pragma once

#include <chrono>
#include <mutex>

namespace ttl {

using Millis = std::chrono::milliseconds;

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Millis now() = 0;
  virtual void sleep_for(Millis duration) = 0;
  virtual void sleep_until(Millis deadline) { sleep_for(deadline - now()); }
};

class SystemClock final : public Clock {
 public:
  Millis now() override;
  void sleep_for(Millis duration) override;
};

SystemClock& system_clock();

// Time advances only when someone sleeps; sleeping never blocks.
class VirtualClock final : public Clock {
 public:
  Millis now() override;
  void sleep_for(Millis duration) override;
  void sleep_until(Millis deadline) override;
  void advance(Millis duration);

 private:
  std::mutex mu_;
  Millis now_{0};
};

}  // namespace ttl
