#include "session/service.hpp"

#include <random>
#include <regex>

#include "eval/metrics.hpp"
#include "twentyq/scoring.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::session {

using nlohmann::json;

struct SessionService::Session {
  std::mutex mu;
  std::string id;
  std::string token;
  std::string participant_id;
  int rounds_completed = 0;
  std::unique_ptr<twentyq::TwentyQuestionsEnv> env;  // null once complete
  std::vector<double> rewards;
  std::vector<game::EpisodeTranscript> transcripts;
  std::optional<std::pair<int, std::string>> revealed;  // (round, word)
};

SessionService::SessionService(SessionConfig config) : config_(std::move(config)) {
  if (config_.rounds < 1) throw Error(ErrorCode::kConfigError, "rounds: must be >= 1");
  lexicon_ = config_.lexicon ? config_.lexicon : twentyq::Lexicon::bundled();
  if (!config_.oracle) config_.oracle = std::make_shared<twentyq::ScriptedOracle>(lexicon_);
}

std::string SessionService::fresh_id() {
  if (config_.id_source) return config_.id_source();
  static thread_local std::random_device rd;
  static const char* kHex = "0123456789abcdef";
  std::string s;
  for (int i = 0; i < 32; ++i) s += kHex[rd() & 0xF];
  return s;
}

void SessionService::start_round(Session& s) const {
  if (s.rounds_completed >= config_.rounds) {
    s.env.reset();
    return;
  }
  // Round r plays case r of the shared schedule, as the model runs do.
  std::string secret = twentyq::secret_for_case(*lexicon_, config_.master_seed, s.rounds_completed);
  s.env = std::make_unique<twentyq::TwentyQuestionsEnv>(lexicon_, secret, config_.oracle, "human");
}

json SessionService::create(const std::string& participant_id) {
  const std::string pid = text::trim(participant_id);
  if (pid.empty()) throw Error(ErrorCode::kInvalidArgument, "participant_id is required");
  auto s = std::make_shared<Session>();
  s->participant_id = pid;
  {
    std::lock_guard lock(mu_);
    do {
      s->id = fresh_id();
    } while (sessions_.count(s->id));
    s->token = fresh_id();
    start_round(*s);
    sessions_[s->id] = s;
  }
  json out = state_json(*s);
  out["token"] = s->token;
  return out;
}

std::shared_ptr<SessionService::Session> SessionService::find_unchecked(
    const std::string& session_id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kSessionNotFound, "no session '" + session_id + "'");
  }
  return it->second;
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& session_id,
                                                              const std::string& token) const {
  auto s = find_unchecked(session_id);
  if (token != s->token) throw Error(ErrorCode::kUnauthorized, "bad or missing session token");
  return s;
}

json SessionService::state_json(const Session& s) const {
  json history = json::array();
  int asked = 0;
  if (s.env) {
    for (const auto& qa : s.env->state().history) {
      history.push_back({{"question", qa.question}, {"answer", qa.answer}});
    }
    asked = s.env->state().turn();
  }
  json j{{"session_id", s.id},
         {"participant_id", s.participant_id},
         {"rounds_total", config_.rounds},
         {"rounds_completed", s.rounds_completed},
         {"complete", s.rounds_completed >= config_.rounds},
         {"round", s.rounds_completed + (s.rounds_completed < config_.rounds ? 1 : 0)},
         {"questions_asked", asked},
         {"questions_left", s.env ? twentyq::kMaxQuestions - asked : 0},
         {"history", history},
         {"round_rewards", s.rewards},
         {"oracle", config_.oracle->kind()}};
  if (s.revealed) {
    j["previous_round"] = {{"round", s.revealed->first}, {"word", s.revealed->second}};
  } else {
    j["previous_round"] = nullptr;
  }
  return j;
}

json SessionService::submit(const std::string& session_id, const std::string& token,
                            const std::string& question) {
  auto s = find(session_id, token);
  std::lock_guard lock(s->mu);
  if (!s->env) throw Error(ErrorCode::kSessionComplete, "all rounds are finished");
  const std::string q = text::trim(question);
  if (q.empty()) throw Error(ErrorCode::kInvalidArgument, "question is empty");

  twentyq::OracleAnswer verdict;
  try {
    verdict = s->env->ask(q);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kOracleFailure || is_provider_error(e.code())) {
      throw Error(ErrorCode::kOracleFailure, std::string("oracle unavailable: ") + e.what());
    }
    throw;
  }

  json out;
  out["answer"] = twentyq::answer_name(verdict);
  out["round_closed"] = false;
  if (s->env->terminal()) {
    const auto& st = s->env->state();
    const double reward = s->env->reward();
    game::EpisodeTranscript t;
    t.episode_id = "human/" + s->id + "/r" + std::to_string(s->rounds_completed);
    t.environment = game::EnvironmentId::kTwentyQ;
    t.case_index = s->rounds_completed;
    t.seed = config_.master_seed;
    for (const auto& qa : st.history) {
      t.turns.push_back({"human", "ask", qa.question, "", qa.question, qa.answer});
    }
    t.metadata = s->env->metadata();
    t.metadata["participant_id"] = s->participant_id;
    t.metadata["session_id"] = s->id;
    t.set_reward(reward);

    s->revealed = std::make_pair(s->rounds_completed + 1, st.secret);
    s->rewards.push_back(reward);
    s->transcripts.push_back(t);
    ++s->rounds_completed;
    if (config_.on_round_closed) config_.on_round_closed(t);
    out["round_closed"] = true;
    out["round_reward"] = reward;
    start_round(*s);
  }
  out["state"] = state_json(*s);
  return out;
}

json SessionService::state(const std::string& session_id, const std::string& token) {
  auto s = find(session_id, token);
  std::lock_guard lock(s->mu);
  return state_json(*s);
}

json SessionService::curves(const std::string& session_id, const std::string& token) {
  auto s = find(session_id, token);
  std::lock_guard lock(s->mu);
  const auto c = eval::running_curve(s->rewards);
  json pts = json::array();
  for (std::size_t i = 0; i < c.cumulative.size(); ++i) {
    pts.push_back({{"t", i + 1}, {"r", c.per_round[i]}, {"R", c.cumulative[i]}});
  }
  json out{{"session_id", s->id},
           {"participant", pts},
           {"optimal_reference", twentyq::optimal_expected_ndcg(static_cast<int>(lexicon_->size()))}};
  if (config_.model_baseline) {
    json base = json::array();
    for (std::size_t i = 0; i < config_.model_baseline->size(); ++i) {
      base.push_back({{"t", i + 1}, {"R", (*config_.model_baseline)[i]}});
    }
    out["model_baseline"] = {{"run", config_.baseline_run}, {"points", base}};
  } else {
    out["model_baseline"] = nullptr;
  }
  return out;
}

std::vector<game::EpisodeTranscript> SessionService::transcripts(
    const std::string& session_id) const {
  auto s = find_unchecked(session_id);
  std::lock_guard lock(s->mu);
  return s->transcripts;
}

namespace {

HttpResponse error_response(const Error& e) {
  int status = 400;
  bool retryable = false;
  switch (e.code()) {
    case ErrorCode::kSessionNotFound: status = 404; break;
    case ErrorCode::kSessionComplete: status = 409; break;
    case ErrorCode::kUnauthorized: status = 401; break;
    case ErrorCode::kOracleFailure:
      status = 503;
      retryable = true;
      break;
    default: break;
  }
  return {status, {{"error", {{"code", error_code_name(e.code())},
                              {"message", e.what()},
                              {"retryable", retryable}}}}};
}

HttpResponse not_found(const std::string& what) {
  return {404, {{"error", {{"code", "NotFound"}, {"message", what}, {"retryable", false}}}}};
}

json parse_body(const std::string& body) {
  if (text::trim(body).empty()) return json::object();
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "request body must be a JSON object");
  }
  return j;
}

std::string string_field(const json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("field '") + name + "' must be a string");
  }
  return j[name].get<std::string>();
}

}  // namespace

HttpResponse SessionService::handle(const std::string& method, const std::string& path,
                                    const std::string& body, const std::string& token) {
  static const std::regex session_re(R"(^/v1/sessions/([A-Za-z0-9_-]+)(/questions|/curves)?$)");
  try {
    if (path == "/v1/sessions") {
      if (method != "POST") return not_found(method + " " + path);
      json req = parse_body(body);
      return {201, create(string_field(req, "participant_id"))};
    }
    std::smatch m;
    if (!std::regex_match(path, m, session_re)) return not_found(path);
    const std::string id = m[1];
    const std::string tail = m[2];
    find(id, token);  // unknown session or bad token wins over a malformed body
    if (tail.empty() && method == "GET") return {200, state(id, token)};
    if (tail == "/curves" && method == "GET") return {200, curves(id, token)};
    if (tail == "/questions" && method == "POST") {
      json req = parse_body(body);
      return {200, submit(id, token, string_field(req, "question"))};
    }
    return not_found(method + " " + path);
  } catch (const Error& e) {
    return error_response(e);
  }
}

}  // namespace ttl::session
