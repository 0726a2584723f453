#include "llm/cache.hpp"

#include <json.hpp>
#include <mutex>

#include "util/error.hpp"
#include "util/hash.hpp"
#include "util/text.hpp"

namespace ttl::llm {

using nlohmann::json;

namespace {
constexpr int kSchemaVersion = 1;
}

std::string cache_key(const std::string& model, const Messages& messages,
                      double temperature, int attempt) {
  json doc;
  doc["model"] = model;
  doc["temperature"] = text::format_exact(temperature);
  doc["attempt"] = attempt;
  auto& msgs = doc["messages"] = json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  return sha256_hex(doc.dump());
}

ExchangeCache::ExchangeCache(CacheMode mode, std::filesystem::path path)
    : mode_(mode), path_(std::move(path)) {
  if (!path_.empty() && std::filesystem::exists(path_)) load();
  if (mode_ == CacheMode::kReplay && !path_.empty() &&
      !std::filesystem::exists(path_)) {
    throw Error(ErrorCode::kMissingFile,
                "replay cache not found: " + path_.string());
  }
}

void ExchangeCache::load() {
  std::ifstream in(path_);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.contains("key") || !doc.contains("response")) {
      throw Error(ErrorCode::kCorruptLog,
                  path_.string() + ":" + std::to_string(lineno) +
                      ": malformed exchange record");
    }
    if (doc.value("schema", 0) > kSchemaVersion) {
      throw Error(ErrorCode::kSchemaVersionMismatch,
                  path_.string() + ":" + std::to_string(lineno) +
                      ": exchange schema " +
                      std::to_string(doc.value("schema", 0)) + " is newer than " +
                      std::to_string(kSchemaVersion));
    }
    ChatResponse r;
    const auto& resp = doc["response"];
    r.text = resp.value("text", "");
    r.finish_reason = resp.value("finish_reason", "stop");
    r.prompt_tokens = resp.value("prompt_tokens", 0);
    r.completion_tokens = resp.value("completion_tokens", 0);
    entries_[doc["key"].get<std::string>()] = std::move(r);
  }
}

std::optional<ChatResponse> ExchangeCache::lookup(const std::string& key) const {
  if (mode_ == CacheMode::kLogOnly) return std::nullopt;
  std::shared_lock lock(mu_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ExchangeCache::store(const std::string& key, const ChatRequest& request,
                          const ChatResponse& response) {
  if (mode_ == CacheMode::kReplay) return;
  std::unique_lock lock(mu_);
  entries_[key] = response;
  if (path_.empty()) return;
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["key"] = key;
  doc["model"] = request.model;
  doc["temperature"] = request.temperature;
  auto& msgs = doc["messages"] = json::array();
  for (const auto& m : request.messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  doc["response"] = {{"text", response.text},
                     {"finish_reason", response.finish_reason},
                     {"prompt_tokens", response.prompt_tokens},
                     {"completion_tokens", response.completion_tokens}};
  if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error(ErrorCode::kIoError, "cannot append to " + path_.string());
  out << doc.dump() << '\n';
}

std::size_t ExchangeCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

}  // namespace ttl::llm
