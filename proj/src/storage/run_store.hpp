#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "experience/records.hpp"
#include "game/types.hpp"

namespace ttl::storage {

inline constexpr int kStoreSchemaVersion = 1;

struct RunManifest {
  std::string run_id;
  game::EnvironmentId environment = game::EnvironmentId::kTwentyQ;
  std::string protocol;  // "fixed" | "incremental"
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t master_seed = 0;
  std::map<std::string, std::string> versions;  // templates digest, tokenizer, ...
  nlohmann::json provider = nlohmann::json::object();  // descriptor, never a key
  std::string created_at;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

// Validates a run id for use as a directory name.
void check_run_id(const std::string& run_id);

enum class Artifact { kEpisodes, kExperience, kPolicies, kHumanSessions };

std::string artifact_file(Artifact a);

// Directory-per-run store. Logs are append-only JSON lines, each stamped with
// schema and run_id; appending a line that is already present is a no-op.
// One writer per run.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Creates the run directory and manifest. Re-creating with an identical
  // manifest is allowed; a different one is Error(kInvalidArgument).
  std::filesystem::path create(const RunManifest& manifest);

  bool exists(const std::string& run_id) const;

  // Throws Error(kUnknownRun).
  std::filesystem::path run_dir(const std::string& run_id) const;
  RunManifest manifest(const std::string& run_id) const;

  // Returns false when an identical record is already stored.
  bool persist(const std::string& run_id, Artifact kind, nlohmann::json record);
  bool persist_episode(const std::string& run_id, const game::EpisodeTranscript& t);
  bool persist_record(const std::string& run_id, const experience::ExperienceRecord& r);
  bool persist_policy(const std::string& run_id, const experience::PolicyDocument& p,
                      const nlohmann::json& extra = nlohmann::json::object());

  void append_event(const std::string& run_id, const std::string& message);

  // Throw Error(kCorruptLog) naming file and line, or
  // Error(kSchemaVersionMismatch) for records from a newer schema.
  std::vector<nlohmann::json> read(const std::string& run_id, Artifact kind) const;
  std::vector<game::EpisodeTranscript> read_episodes(const std::string& run_id) const;
  std::vector<game::EpisodeTranscript> read_human_sessions(const std::string& run_id) const;
  std::vector<experience::PolicyDocument> read_policies(const std::string& run_id) const;
  std::vector<nlohmann::json> read_records(const std::string& run_id) const;

 private:
  std::filesystem::path root_;
  mutable std::mutex mu_;
  std::map<std::filesystem::path, std::set<std::string>> seen_;
};

// Parses JSON lines from a file; a missing file yields no lines.
std::vector<nlohmann::json> read_json_lines(const std::filesystem::path& path);

nlohmann::json policy_to_json(const experience::PolicyDocument& p);
experience::PolicyDocument policy_from_json(const nlohmann::json& j);

game::EpisodeTranscript transcript_from_record(const nlohmann::json& j);

}  // namespace ttl::storage
