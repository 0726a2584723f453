#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "game/types.hpp"
#include "twentyq/env.hpp"
#include "twentyq/oracle.hpp"

namespace ttl::session {

struct SessionConfig {
  int rounds = 20;
  std::uint64_t master_seed = 0;
  std::shared_ptr<twentyq::Oracle> oracle;  // scripted over the lexicon when null
  std::shared_ptr<const twentyq::Lexicon> lexicon;  // bundled when null
  std::optional<std::vector<double>> model_baseline;  // cumulative R(t) of a model run
  std::string baseline_run;  // where model_baseline came from, for display
  // Called with each closed round's transcript, e.g. to append it to a log.
  std::function<void(const game::EpisodeTranscript&)> on_round_closed;
  // Source of session ids and tokens; random_device when unset.
  std::function<std::string()> id_source;
};

struct HttpResponse {
  int status = 200;
  nlohmann::json body;
};

// Human-study back end: cumulative Twenty Questions rounds per participant.
// Sessions are independent; calls on one session are serialized. The current
// round's secret never leaves the service; the previous round's word is
// revealed once that round has closed.
class SessionService {
 public:
  explicit SessionService(SessionConfig config);

  // Routes /v1 requests. `token` is the X-Session-Token header value.
  HttpResponse handle(const std::string& method, const std::string& path,
                      const std::string& body, const std::string& token);

  nlohmann::json create(const std::string& participant_id);
  nlohmann::json submit(const std::string& session_id, const std::string& token,
                        const std::string& question);
  nlohmann::json state(const std::string& session_id, const std::string& token);
  nlohmann::json curves(const std::string& session_id, const std::string& token);

  // Closed-round transcripts of one session, in round order.
  std::vector<game::EpisodeTranscript> transcripts(const std::string& session_id) const;

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& session_id, const std::string& token) const;
  std::shared_ptr<Session> find_unchecked(const std::string& session_id) const;
  void start_round(Session& s) const;
  nlohmann::json state_json(const Session& s) const;
  std::string fresh_id();

  SessionConfig config_;
  std::shared_ptr<const twentyq::Lexicon> lexicon_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace ttl::session
