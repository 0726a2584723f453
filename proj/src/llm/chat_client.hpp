#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>

#include "llm/cache.hpp"
#include "llm/provider.hpp"
#include "llm/rate_limiter.hpp"

namespace ttl::llm {

// Provider built from a Transport plus retry, rate limiting and the exchange
// cache. Safe for concurrent calls.
class ChatClient final : public Provider {
 public:
  ChatClient(ProviderConfig config, std::shared_ptr<Transport> transport,
             std::shared_ptr<ExchangeCache> cache = nullptr,
             std::shared_ptr<RateLimiter> limiter = nullptr,
             Clock* clock = nullptr);

  ChatResponse complete(const Messages& messages) override;

  std::string model_name() const override { return config_.model_name; }
  double temperature() const override { return config_.temperature; }

  const ProviderConfig& config() const { return config_; }

  // Number of requests that reached the transport (retries included).
  std::size_t transport_calls() const { return transport_calls_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }

 private:
  int next_ordinal(const std::string& base_key);
  ChatResponse send_with_retry(const ChatRequest& request);

  ProviderConfig config_;
  std::shared_ptr<Transport> transport_;
  std::shared_ptr<ExchangeCache> cache_;
  std::shared_ptr<RateLimiter> limiter_;
  Clock* clock_;

  std::mutex ordinal_mu_;
  std::map<std::string, int> ordinals_;
  std::atomic<std::size_t> transport_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

// Transport that refuses every call; backs replay-only clients so a cache
// miss can never reach the network.
class OfflineTransport final : public Transport {
 public:
  ChatResponse send(const ChatRequest& request) override;
};

}  // namespace ttl::llm
