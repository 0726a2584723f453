#include "ttl/ttl.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "app/runner.hpp"
#include "eval/metrics.hpp"
#include "twentyq/scoring.hpp"
#include "util/error.hpp"

struct ttl_session_service {
  std::unique_ptr<ttl::session::SessionService> impl;
};

namespace {

thread_local std::string g_last_error;

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p) std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <typename F>
ttl_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return TTL_OK;
  } catch (const ttl::Error& e) {
    g_last_error = e.what();
    return static_cast<ttl_status>(static_cast<int>(e.code()));
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("config: ") + e.what();
    return TTL_CONFIG_ERROR;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TTL_INTERNAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return TTL_INTERNAL_ERROR;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw ttl::Error(ttl::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

nlohmann::json parse_config(const char* text) {
  require(text, "config_json");
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ttl::Error(ttl::ErrorCode::kConfigError, "config: not valid JSON");
  return j;
}

}  // namespace

extern "C" {

const char* ttl_version(void) { return "0.1.0"; }

const char* ttl_status_name(ttl_status status) {
  if (status == TTL_OK) return "Ok";
  if (status == TTL_INTERNAL_ERROR) return "InternalError";
  return ttl::error_code_name(static_cast<ttl::ErrorCode>(status)).data();
}

const char* ttl_last_error_message(void) { return g_last_error.c_str(); }

void ttl_string_free(char* s) { std::free(s); }

ttl_status ttl_ndcg_at_20(int rank, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ttl::twentyq::ndcg_at_20(rank == 0 ? std::nullopt : std::optional<int>(rank));
  });
}

ttl_status ttl_optimal_expected_ndcg(int lexicon_size, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ttl::twentyq::optimal_expected_ndcg(lexicon_size);
  });
}

ttl_status ttl_improvement_pct(double base, double treated, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ttl::eval::improvement_pct(base, treated);
  });
}

ttl_status ttl_run(const char* config_json, char** result_json) {
  return guarded([&] {
    require(result_json, "result_json");
    auto request = ttl::app::parse_run_request(parse_config(config_json));
    *result_json = dup(ttl::app::execute_run(request).to_json().dump(2));
  });
}

ttl_status ttl_report(const char* out_dir, const char* run_id, const char* dest_dir,
                      char** result_json) {
  return guarded([&] {
    require(out_dir, "out_dir");
    require(run_id, "run_id");
    require(result_json, "result_json");
    auto files = ttl::app::regenerate_report(out_dir, run_id, dest_dir ? dest_dir : "");
    *result_json = dup(nlohmann::json{{"run_id", run_id}, {"files", files}}.dump(2));
  });
}

ttl_status ttl_replay(const char* out_dir, const char* run_id, char** result_json) {
  return guarded([&] {
    require(out_dir, "out_dir");
    require(run_id, "run_id");
    require(result_json, "result_json");
    *result_json = dup(ttl::app::replay_run(out_dir, run_id).to_json().dump(2));
  });
}

ttl_status ttl_session_service_create(const char* config_json, ttl_session_service** out) {
  return guarded([&] {
    require(out, "out");
    auto cfg = ttl::app::parse_session_config(parse_config(config_json));
    *out = new ttl_session_service{ttl::app::make_session_service(cfg)};
  });
}

void ttl_session_service_destroy(ttl_session_service* service) { delete service; }

ttl_status ttl_session_handle(ttl_session_service* service, const char* method, const char* path,
                              const char* body, const char* token, int* http_status,
                              char** response_json) {
  return guarded([&] {
    require(service, "service");
    require(method, "method");
    require(path, "path");
    require(http_status, "http_status");
    require(response_json, "response_json");
    auto r = service->impl->handle(method, path, body ? body : "", token ? token : "");
    *http_status = r.status;
    *response_json = dup(r.body.dump());
  });
}

}  // extern "C"
