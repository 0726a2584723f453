#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "app/config.hpp"
#include "session/service.hpp"

namespace ttl::app {

struct RunOutcome {
  std::string run_id;
  std::filesystem::path run_dir;
  std::map<std::string, std::string> reports;  // file name -> content
  std::size_t transport_calls = 0;
  std::size_t cache_hits = 0;

  nlohmann::json to_json() const;
};

// Validates, resolves the provider (mock script, replay log or HTTP with a
// key from the environment), runs the protocol, persists every artifact and
// writes the reports. A missing API key fails before any episode starts.
RunOutcome execute_run(const RunRequest& request);

// Regenerates report files from a stored run into `dest` (the run directory
// when empty).
std::map<std::string, std::string> regenerate_report(const std::filesystem::path& out_dir,
                                                     const std::string& run_id,
                                                     const std::filesystem::path& dest = {});

struct ReplayOutcome {
  std::string run_id;
  std::filesystem::path replay_dir;
  std::vector<std::string> compared;
  std::vector<std::string> differing;
  std::size_t transport_calls = 0;
  std::size_t cache_hits = 0;

  bool identical() const { return differing.empty(); }
  nlohmann::json to_json() const;
};

// Re-executes a stored run offline from its exchange log into
// <run>/replay/<run_id>, then compares logs and reports byte for byte.
ReplayOutcome replay_run(const std::filesystem::path& out_dir, const std::string& run_id);

struct SessionServerConfig {
  int rounds = 20;
  std::uint64_t seed = 0;
  std::string oracle = "scripted";  // or "llm"
  std::optional<std::string> mock_script;
  llm::ProviderConfig provider;
  std::optional<std::filesystem::path> out_dir;  // human_sessions.jsonl goes here
  std::optional<std::filesystem::path> baseline_run;  // run dir with curves.json
};

SessionServerConfig parse_session_config(const nlohmann::json& doc);

std::unique_ptr<session::SessionService> make_session_service(const SessionServerConfig& cfg);

}  // namespace ttl::app
