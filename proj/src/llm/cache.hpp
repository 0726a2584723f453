#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>

#include "llm/types.hpp"

namespace ttl::llm {

enum class CacheMode {
  kLogOnly,  // append every exchange, never serve from the cache
  kRecord,   // serve hits, append misses
  kReplay,   // serve hits, a miss is Error(kCacheMiss); nothing is written
};

// Digest of (model_name, messages, temperature, attempt ordinal): 256-bit
// SHA-256, hex encoded.
std::string cache_key(const std::string& model, const Messages& messages,
                      double temperature, int attempt);

// Line-delimited exchange log that doubles as the replay cache. Concurrent
// readers, serialized writers.
class ExchangeCache {
 public:
  // An empty path keeps the cache in memory only.
  ExchangeCache(CacheMode mode, std::filesystem::path path);

  CacheMode mode() const { return mode_; }

  std::optional<ChatResponse> lookup(const std::string& key) const;
  void store(const std::string& key, const ChatRequest& request,
             const ChatResponse& response);

  std::size_t size() const;

 private:
  void load();

  CacheMode mode_;
  std::filesystem::path path_;
  mutable std::shared_mutex mu_;
  std::map<std::string, ChatResponse> entries_;
};

}  // namespace ttl::llm
