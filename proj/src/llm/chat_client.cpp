#include "llm/chat_client.hpp"

#include "llm/errors.hpp"
#include "util/error.hpp"

namespace ttl::llm {

Millis RetryPolicy::delay_before(int attempt) const {
  if (backoff.empty() || attempt <= 1) return Millis(0);
  std::size_t idx = static_cast<std::size_t>(attempt - 2);
  if (idx >= backoff.size()) idx = backoff.size() - 1;
  return backoff[idx];
}

ChatClient::ChatClient(ProviderConfig config,
                       std::shared_ptr<Transport> transport,
                       std::shared_ptr<ExchangeCache> cache,
                       std::shared_ptr<RateLimiter> limiter, Clock* clock)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      cache_(std::move(cache)),
      limiter_(std::move(limiter)),
      clock_(clock ? clock : &system_clock()) {
  if (!transport_) {
    throw Error(ErrorCode::kInvalidArgument, "ChatClient requires a transport");
  }
  if (config_.retry.max_attempts < 1) {
    throw Error(ErrorCode::kConfigError, "retry.max_attempts: must be >= 1");
  }
}

int ChatClient::next_ordinal(const std::string& base_key) {
  std::lock_guard lock(ordinal_mu_);
  return ordinals_[base_key]++;
}

ChatResponse ChatClient::complete(const Messages& messages) {
  ChatRequest request;
  request.model = config_.model_name;
  request.temperature = config_.temperature;
  request.max_output_tokens = config_.max_output_tokens;
  request.messages = messages;

  // Identical requests get increasing ordinals so temperature-1 resamples
  // stay distinguishable on replay.
  const std::string base = cache_key(request.model, messages, request.temperature, -1);
  const int attempt = next_ordinal(base);
  const std::string key =
      cache_key(request.model, messages, request.temperature, attempt);

  ChatResponse response;
  std::optional<ChatResponse> hit;
  if (cache_) hit = cache_->lookup(key);
  if (hit) {
    ++cache_hits_;
    response = std::move(*hit);
  } else {
    if (cache_ && cache_->mode() == CacheMode::kReplay) {
      throw Error(ErrorCode::kCacheMiss,
                  "replay cache has no exchange for key " + key);
    }
    response = send_with_retry(request);
    if (cache_) cache_->store(key, request, response);
  }
  if (response.finish_reason == "content_filter" ||
      response.finish_reason == "refusal") {
    throw Error(ErrorCode::kContentRefusal,
                "model " + config_.model_name + " refused the request (" +
                    response.finish_reason + ")");
  }
  return response;
}

ChatResponse ChatClient::send_with_retry(const ChatRequest& request) {
  std::string last_error;
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    if (attempt > 1) clock_->sleep_for(config_.retry.delay_before(attempt));
    if (limiter_) limiter_->acquire();
    ++transport_calls_;
    try {
      return transport_->send(request);
    } catch (const TransientFailure& e) {
      last_error = e.what();
    }
  }
  throw Error(ErrorCode::kProviderUnavailable,
              config_.model_name + " unavailable after " +
                  std::to_string(config_.retry.max_attempts) +
                  " attempts: " + last_error);
}

ChatResponse OfflineTransport::send(const ChatRequest&) {
  throw Error(ErrorCode::kCacheMiss,
              "offline transport: request not present in the replay cache");
}

}  // namespace ttl::llm
