/* C interface to the ttlbench harness. All strings are UTF-8. Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with ttl_string_free. On failure a function returns a non-zero
 * status and ttl_last_error_message() describes it (per thread). */
#ifndef TTL_TTL_H
#define TTL_TTL_H

#include <stddef.h>

#if defined(TTL_BUILDING_LIBRARY)
#define TTL_API __attribute__((visibility("default")))
#else
#define TTL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ttl_status {
  TTL_OK = 0,
  TTL_INVALID_ARGUMENT = 1,
  TTL_CONFIG_ERROR,
  TTL_IO_ERROR,
  TTL_MISSING_ANSWER_TAGS,
  TTL_EMPTY_ANSWER,
  TTL_AGENT_FAILURE,
  TTL_ORACLE_FAILURE,
  TTL_RANK_OUT_OF_RANGE,
  TTL_PHASE_INCOMPLETE,
  TTL_EMPTY_INPUT,
  TTL_INCONSISTENT_HISTORY,
  TTL_DANGLING_ATTACHMENT,
  TTL_BUDGET_EXCEEDED,
  TTL_MISSING_FILE,
  TTL_EMPTY_POLICY,
  TTL_UNDEFINED_IMPROVEMENT,
  TTL_SHAPE_MISMATCH,
  TTL_PROVIDER_UNAVAILABLE,
  TTL_AUTH_ERROR,
  TTL_CONTENT_REFUSAL,
  TTL_SCRIPT_EXHAUSTED,
  TTL_CACHE_MISS,
  TTL_UNKNOWN_RUN,
  TTL_SCHEMA_VERSION_MISMATCH,
  TTL_CORRUPT_LOG,
  TTL_SESSION_COMPLETE,
  TTL_SESSION_NOT_FOUND,
  TTL_UNAUTHORIZED,
  TTL_INTERNAL_ERROR = 100
} ttl_status;

typedef struct ttl_session_service ttl_session_service;

TTL_API const char* ttl_version(void);
TTL_API const char* ttl_status_name(ttl_status status);
TTL_API const char* ttl_last_error_message(void);
TTL_API void ttl_string_free(char* s);

/* rank in 1..20, or 0 for an unsolved game. */
TTL_API ttl_status ttl_ndcg_at_20(int rank, double* out);
TTL_API ttl_status ttl_optimal_expected_ndcg(int lexicon_size, double* out);
TTL_API ttl_status ttl_improvement_pct(double base, double treated, double* out);

/* Runs a protocol described by a JSON config; *result_json receives the run
 * id, run directory, report paths and provider call counts. */
TTL_API ttl_status ttl_run(const char* config_json, char** result_json);

/* Regenerates reports of a stored run; dest_dir may be NULL or empty. */
TTL_API ttl_status ttl_report(const char* out_dir, const char* run_id, const char* dest_dir,
                              char** result_json);

/* Re-executes a stored run offline and compares the outputs byte for byte. */
TTL_API ttl_status ttl_replay(const char* out_dir, const char* run_id, char** result_json);

/* Human-study session service. */
TTL_API ttl_status ttl_session_service_create(const char* config_json,
                                              ttl_session_service** out);
TTL_API void ttl_session_service_destroy(ttl_session_service* service);
/* Routes one request; token may be NULL. Always yields an HTTP status and a
 * JSON body unless the arguments themselves are invalid. */
TTL_API ttl_status ttl_session_handle(ttl_session_service* service, const char* method,
                                      const char* path, const char* body, const char* token,
                                      int* http_status, char** response_json);

#ifdef __cplusplus
}
#endif

#endif /* TTL_TTL_H */
