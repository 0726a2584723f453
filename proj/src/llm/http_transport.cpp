#include "llm/http_transport.hpp"

#include <httplib.h>

#include <cstdlib>
#include <json.hpp>

#include "llm/errors.hpp"
#include "util/error.hpp"

namespace ttl::llm {

using nlohmann::json;

HttpTransport::HttpTransport(std::string endpoint, std::string api_key,
                             int timeout_seconds)
    : api_key_(std::move(api_key)), timeout_seconds_(timeout_seconds) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kConfigError,
                "provider.endpoint: expected scheme://host/path, got '" + endpoint + "'");
  }
  auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    base_ = endpoint;
    path_ = "/";
  } else {
    base_ = endpoint.substr(0, path_start);
    path_ = endpoint.substr(path_start);
  }
}

std::string encode_chat_request(const ChatRequest& request) {
  json body;
  body["model"] = request.model;
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_output_tokens;
  auto& msgs = body["messages"] = json::array();
  for (const auto& m : request.messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  return body.dump();
}

ChatResponse decode_chat_response(const std::string& body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty()) {
    throw TransientFailure("malformed chat-completion response");
  }
  const auto& choice = doc["choices"][0];
  ChatResponse r;
  r.finish_reason = choice.value("finish_reason", "stop");
  if (choice.contains("message")) {
    const auto& msg = choice["message"];
    if (msg.contains("refusal") && msg["refusal"].is_string() &&
        !msg["refusal"].get<std::string>().empty()) {
      r.finish_reason = "refusal";
      r.text = msg["refusal"].get<std::string>();
    } else if (msg.contains("content") && msg["content"].is_string()) {
      r.text = msg["content"].get<std::string>();
    }
  }
  if (doc.contains("usage") && doc["usage"].is_object()) {
    r.prompt_tokens = doc["usage"].value("prompt_tokens", 0);
    r.completion_tokens = doc["usage"].value("completion_tokens", 0);
  }
  return r;
}

ChatResponse HttpTransport::send(const ChatRequest& request) {
  httplib::Client client(base_);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  client.set_write_timeout(timeout_seconds_, 0);
  httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
  auto res = client.Post(path_, headers, encode_chat_request(request),
                         "application/json");
  if (!res) {
    throw TransientFailure("transport error: " + httplib::to_string(res.error()));
  }
  if (res->status == 401 || res->status == 403) {
    throw Error(ErrorCode::kAuthError,
                "provider rejected credentials (HTTP " + std::to_string(res->status) + ")");
  }
  if (res->status == 408 || res->status == 429 || res->status >= 500) {
    throw TransientFailure("HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kProviderUnavailable,
                "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  }
  return decode_chat_response(res->body);
}

std::string api_key_from_env(const ProviderConfig& config) {
  const char* value = std::getenv(config.api_key_env.c_str());
  if (value == nullptr || *value == '\0') {
    throw Error(ErrorCode::kAuthError,
                "environment variable " + config.api_key_env +
                    " is not set; pass --mock or --replay to run without a provider");
  }
  return value;
}

}  // namespace ttl::llm
