// Command-line front end. Talks to the harness only through the C API.
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "ttl/ttl.h"

using nlohmann::json;

namespace {

struct Owned {
  char* s = nullptr;
  ~Owned() { ttl_string_free(s); }
};

int report_error(ttl_status st) {
  std::cerr << "error [" << ttl_status_name(st) << "]: " << ttl_last_error_message() << "\n";
  return st == TTL_AUTH_ERROR ? 4 : 1;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return json::parse(ss.str());
}

struct RunFlags {
  std::string protocol;
  std::string config_file;
  std::string env;
  std::string conditions;
  int rounds = -1;
  int samples = -1;
  int experience = -1;
  int test_cases = -1;
  std::string seed;
  std::string mock;
  std::string replay;
  std::string policy;
  std::string out;
  std::string run_id;
  std::string agents;
  std::string oracle;
  std::string opponents;
  std::string model;
  std::string endpoint;
  double temperature = -1;
  std::string api_key_env;
  std::string word_pairs;
  std::string labels;
  int players = -1;
};

json build_run_config(const RunFlags& f) {
  json cfg = f.config_file.empty() ? json::object() : read_json_file(f.config_file);
  cfg["protocol"] = f.protocol;
  auto set_str = [&](const char* key, const std::string& v) {
    if (!v.empty()) cfg[key] = v;
  };
  auto set_int = [&](const char* key, int v) {
    if (v >= 0) cfg[key] = v;
  };
  set_str("env", f.env);
  set_str("conditions", f.conditions);
  set_int("rounds", f.rounds);
  set_int("samples", f.samples);
  set_int("experience_rounds", f.experience);
  set_int("test_cases", f.test_cases);
  set_str("seed", f.seed);
  set_str("mock_script", f.mock);
  set_str("replay_run", f.replay);
  set_str("human_policy_file", f.policy);
  set_str("out", f.out);
  set_str("run_id", f.run_id);
  set_str("agents", f.agents);
  set_str("oracle", f.oracle);
  set_str("opponents", f.opponents);
  set_str("word_pairs_file", f.word_pairs);
  set_int("num_players", f.players);
  if (!f.labels.empty()) {
    auto comma = f.labels.find(',');
    if (comma == std::string::npos) throw std::runtime_error("--labels expects DIFF,NORMAL");
    cfg["role_labels"] = {{"difference", f.labels.substr(0, comma)},
                          {"normal", f.labels.substr(comma + 1)}};
  }
  json& p = cfg["provider"];
  if (!p.is_object()) p = json::object();
  if (!f.model.empty()) p["model"] = f.model;
  if (!f.endpoint.empty()) p["endpoint"] = f.endpoint;
  if (f.temperature >= 0) p["temperature"] = f.temperature;
  if (!f.api_key_env.empty()) p["api_key_env"] = f.api_key_env;
  if (p.empty()) cfg.erase("provider");
  return cfg;
}

int cmd_run(const RunFlags& f) {
  json cfg = build_run_config(f);
  Owned result;
  ttl_status st = ttl_run(cfg.dump().c_str(), &result.s);
  if (st != TTL_OK) return report_error(st);
  json r = json::parse(result.s);
  std::cout << r["report_csv"].get<std::string>();
  std::cout << "run " << r["run_id"].get<std::string>() << " written to "
            << r["run_dir"].get<std::string>() << "\n";
  std::cout << "provider calls: " << r["transport_calls"] << ", cache hits: " << r["cache_hits"]
            << "\n";
  return 0;
}

int cmd_report(const std::string& out, const std::string& run_id, const std::string& dest) {
  Owned result;
  ttl_status st = ttl_report(out.c_str(), run_id.c_str(), dest.c_str(), &result.s);
  if (st != TTL_OK) return report_error(st);
  json r = json::parse(result.s);
  const auto& files = r["files"];
  if (files.contains("report.csv")) std::cout << files["report.csv"].get<std::string>();
  for (const auto& [name, content] : files.items()) {
    std::cout << "wrote " << name << "\n";
  }
  return 0;
}

int cmd_replay(const std::string& out, const std::string& run_id) {
  Owned result;
  ttl_status st = ttl_replay(out.c_str(), run_id.c_str(), &result.s);
  if (st != TTL_OK) return report_error(st);
  json r = json::parse(result.s);
  std::cout << "replayed " << run_id << " into " << r["replay_dir"].get<std::string>() << "\n";
  std::cout << "provider calls: " << r["transport_calls"] << ", cache hits: " << r["cache_hits"]
            << "\n";
  for (const auto& name : r["compared"]) {
    bool differs = false;
    for (const auto& d : r["differing"]) differs = differs || d == name;
    std::cout << (differs ? "DIFFERS   " : "identical ") << name.get<std::string>() << "\n";
  }
  return r["identical"].get<bool>() ? 0 : 3;
}

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

struct ServeFlags {
  std::string host = "127.0.0.1";
  int port = 8080;
  int rounds = 20;
  std::string seed = "0";
  std::string oracle = "scripted";
  std::string mock;
  std::string out;
  std::string baseline_run;
  std::string static_dir;
};

int cmd_serve(const ServeFlags& f) {
  json cfg{{"rounds", f.rounds}, {"seed", f.seed}, {"oracle", f.oracle}};
  if (!f.mock.empty()) cfg["mock_script"] = f.mock;
  if (!f.out.empty()) cfg["out"] = f.out;
  if (!f.baseline_run.empty()) cfg["baseline_run"] = f.baseline_run;
  ttl_session_service* service = nullptr;
  ttl_status st = ttl_session_service_create(cfg.dump().c_str(), &service);
  if (st != TTL_OK) return report_error(st);

  httplib::Server server;
  auto route = [service](const httplib::Request& req, httplib::Response& res) {
    int status = 500;
    Owned body;
    const std::string token = req.get_header_value("X-Session-Token");
    ttl_status s = ttl_session_handle(service, req.method.c_str(), req.path.c_str(),
                                      req.body.c_str(), token.c_str(), &status, &body.s);
    if (s != TTL_OK) {
      res.status = 500;
      json err{{"error",
                {{"code", ttl_status_name(s)}, {"message", ttl_last_error_message()}, {"retryable", false}}}};
      res.set_content(err.dump(), "application/json");
      return;
    }
    res.status = status;
    res.set_content(body.s, "application/json");
  };
  server.Get(R"(/v1/.*)", route);
  server.Post(R"(/v1/.*)", route);
  if (!f.static_dir.empty() && !server.set_mount_point("/", f.static_dir)) {
    std::cerr << "error: cannot serve static files from " << f.static_dir << "\n";
    ttl_session_service_destroy(service);
    return 1;
  }
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "session API listening on http://" << f.host << ":" << f.port << "/v1\n"
            << std::flush;
  const bool ok = server.listen(f.host, f.port);
  g_server = nullptr;
  ttl_session_service_destroy(service);
  if (!ok) {
    std::cerr << "error: cannot listen on " << f.host << ":" << f.port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ttlbench: test-time learning evaluation harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ttl_version()));

  RunFlags rf;
  auto* run = app.add_subcommand("run", "Run the fixed or incremental protocol");
  run->add_option("protocol", rf.protocol, "fixed | incremental")
      ->required()
      ->check(CLI::IsMember({"fixed", "incremental"}));
  run->add_option("--config", rf.config_file, "JSON run configuration; flags override it");
  run->add_option("--env", rf.env, "twentyq | undercover");
  run->add_option("--conditions", rf.conditions, "comma-separated conditions, or 'all'");
  run->add_option("--rounds", rf.rounds, "incremental rounds T (default 50)");
  run->add_option("--samples", rf.samples, "incremental samples S (default 3)");
  run->add_option("--experience", rf.experience, "fixed-setting experience episodes N (default 5)");
  run->add_option("--test-cases", rf.test_cases, "fixed-setting test cases M (default 32)");
  run->add_option("--seed", rf.seed, "master seed (default 0)");
  run->add_option("--mock", rf.mock, "scripted mock provider file");
  run->add_option("--replay", rf.replay, "reuse the exchange log of an earlier run, offline");
  run->add_option("--policy", rf.policy, "human-authored policy file");
  run->add_option("--out", rf.out, "runs directory (default ./runs)");
  run->add_option("--run-id", rf.run_id, "explicit run id");
  run->add_option("--agents", rf.agents, "llm | scripted");
  run->add_option("--oracle", rf.oracle, "llm | scripted (Twenty Questions)");
  run->add_option("--opponents", rf.opponents, "llm | scripted (Undercover)");
  run->add_option("--model", rf.model, "model name");
  run->add_option("--endpoint", rf.endpoint, "chat-completion endpoint URL");
  run->add_option("--temperature", rf.temperature, "sampling temperature (default 1)");
  run->add_option("--api-key-env", rf.api_key_env, "environment variable holding the API key");
  run->add_option("--word-pairs", rf.word_pairs, "Undercover word-pair JSON file");
  run->add_option("--labels", rf.labels, "Undercover role labels DIFF,NORMAL");
  run->add_option("--players", rf.players, "Undercover player count (default 5)");

  std::string out = "runs";
  std::string run_id;
  std::string dest;
  auto* report = app.add_subcommand("report", "Regenerate the report files of a run");
  report->add_option("run_id", run_id)->required();
  report->add_option("--out", out, "runs directory");
  report->add_option("--dest", dest, "write the files here instead of the run directory");

  auto* replay = app.add_subcommand("replay", "Re-execute a run offline and compare outputs");
  replay->add_option("run_id", run_id)->required();
  replay->add_option("--out", out, "runs directory");

  ServeFlags sf;
  auto* serve = app.add_subcommand("human-serve", "Serve the human-study session API");
  serve->add_option("--host", sf.host);
  serve->add_option("--port", sf.port);
  serve->add_option("--rounds", sf.rounds, "rounds per participant (default 20)");
  serve->add_option("--seed", sf.seed, "master seed of the case schedule");
  serve->add_option("--oracle", sf.oracle)->check(CLI::IsMember({"scripted", "llm"}));
  serve->add_option("--mock", sf.mock, "mock provider file for the llm oracle");
  serve->add_option("--out", sf.out, "directory receiving human_sessions.jsonl");
  serve->add_option("--baseline-run", sf.baseline_run, "run directory whose baseline curve is shown");
  serve->add_option("--static", sf.static_dir, "directory with the browser UI bundle");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(rf);
    if (*report) return cmd_report(out, run_id, dest);
    if (*replay) return cmd_replay(out, run_id);
    if (*serve) return cmd_serve(sf);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
