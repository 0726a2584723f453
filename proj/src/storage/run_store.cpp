#include "storage/run_store.hpp"

#include <fstream>
#include <regex>

#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::storage {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifestFile = "manifest.json";

void check_schema(const json& j, const std::string& where) {
  const int schema = j.value("schema", 0);
  if (schema > kStoreSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                where + ": schema " + std::to_string(schema) + " is newer than supported " +
                    std::to_string(kStoreSchemaVersion));
  }
}

}  // namespace

json RunManifest::to_json() const {
  return {{"schema", kStoreSchemaVersion},
          {"run_id", run_id},
          {"environment_id", game::environment_name(environment)},
          {"protocol", protocol},
          {"config", config},
          {"master_seed", std::to_string(master_seed)},
          {"versions", versions},
          {"provider", provider},
          {"created_at", created_at}};
}

RunManifest RunManifest::from_json(const json& j) {
  check_schema(j, "manifest");
  try {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.environment = game::parse_environment(j.at("environment_id").get<std::string>());
    m.protocol = j.at("protocol").get<std::string>();
    m.config = j.value("config", json::object());
    m.master_seed = std::stoull(j.at("master_seed").get<std::string>());
    m.versions = j.value("versions", std::map<std::string, std::string>{});
    m.provider = j.value("provider", json::object());
    m.created_at = j.value("created_at", "");
    return m;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kCorruptLog, std::string("manifest: ") + e.what());
  }
}

void check_run_id(const std::string& run_id) {
  static const std::regex ok(R"(^[A-Za-z0-9][A-Za-z0-9._-]{0,127}$)");
  if (!std::regex_match(run_id, ok)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid run id '" + run_id + "'");
  }
}

std::string artifact_file(Artifact a) {
  switch (a) {
    case Artifact::kEpisodes: return "episodes.jsonl";
    case Artifact::kExperience: return "experience.jsonl";
    case Artifact::kPolicies: return "policies.jsonl";
    case Artifact::kHumanSessions: return "human_sessions.jsonl";
  }
  return "episodes.jsonl";
}

RunStore::RunStore(fs::path root) : root_(std::move(root)) {}

fs::path RunStore::create(const RunManifest& manifest) {
  check_run_id(manifest.run_id);
  const fs::path dir = root_ / manifest.run_id;
  const fs::path file = dir / kManifestFile;
  const std::string body = manifest.to_json().dump(2) + "\n";
  std::lock_guard lock(mu_);
  if (fs::exists(file)) {
    if (text::read_file(file) != body) {
      throw Error(ErrorCode::kInvalidArgument,
                  "run " + manifest.run_id + " already exists with a different manifest");
    }
    return dir;
  }
  fs::create_directories(dir);
  text::write_file(file, body);
  return dir;
}

bool RunStore::exists(const std::string& run_id) const {
  return fs::exists(root_ / run_id / kManifestFile);
}

fs::path RunStore::run_dir(const std::string& run_id) const {
  check_run_id(run_id);
  if (!exists(run_id)) {
    throw Error(ErrorCode::kUnknownRun, "no run '" + run_id + "' under " + root_.string());
  }
  return root_ / run_id;
}

RunManifest RunStore::manifest(const std::string& run_id) const {
  const fs::path file = run_dir(run_id) / kManifestFile;
  json j = json::parse(text::read_file(file), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kCorruptLog, file.string() + ": not valid JSON");
  return RunManifest::from_json(j);
}

bool RunStore::persist(const std::string& run_id, Artifact kind, json record) {
  const fs::path file = run_dir(run_id) / artifact_file(kind);
  record["schema"] = kStoreSchemaVersion;
  record["run_id"] = run_id;
  const std::string line = record.dump();

  std::lock_guard lock(mu_);
  auto [it, fresh] = seen_.try_emplace(file);
  if (fresh && fs::exists(file)) {
    std::ifstream in(file, std::ios::binary);
    for (std::string l; std::getline(in, l);) it->second.insert(l);
  }
  if (!it->second.insert(line).second) return false;
  std::ofstream out(file, std::ios::binary | std::ios::app);
  out << line << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "cannot append to " + file.string());
  return true;
}

bool RunStore::persist_episode(const std::string& run_id, const game::EpisodeTranscript& t) {
  return persist(run_id, Artifact::kEpisodes, json::parse(game::to_json_line(t)));
}

bool RunStore::persist_record(const std::string& run_id, const experience::ExperienceRecord& r) {
  return persist(run_id, Artifact::kExperience,
                 {{"id", r.id}, {"episode_id", r.transcript.episode_id},
                  {"reward", r.reward}, {"reflection", r.reflection}});
}

bool RunStore::persist_policy(const std::string& run_id, const experience::PolicyDocument& p,
                              const json& extra) {
  json j = policy_to_json(p);
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return persist(run_id, Artifact::kPolicies, std::move(j));
}

void RunStore::append_event(const std::string& run_id, const std::string& message) {
  const fs::path file = run_dir(run_id) / "events.log";
  std::lock_guard lock(mu_);
  std::ofstream out(file, std::ios::binary | std::ios::app);
  out << message << '\n';
}

std::vector<json> read_json_lines(const fs::path& path) {
  std::vector<json> out;
  if (!fs::exists(path)) return out;
  std::ifstream in(path, std::ios::binary);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    const std::string where = path.filename().string() + " line " + std::to_string(n);
    if (j.is_discarded() || !j.is_object()) {
      throw Error(ErrorCode::kCorruptLog, where + ": malformed record");
    }
    check_schema(j, where);
    j["__line"] = n;
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<json> RunStore::read(const std::string& run_id, Artifact kind) const {
  return read_json_lines(run_dir(run_id) / artifact_file(kind));
}

game::EpisodeTranscript transcript_from_record(const json& j) {
  json copy = j;
  copy.erase("__line");
  copy.erase("run_id");
  return game::transcript_from_json_line(copy.dump());
}

namespace {

std::vector<game::EpisodeTranscript> read_transcripts(const std::vector<json>& lines,
                                                      const std::string& file) {
  std::vector<game::EpisodeTranscript> out;
  for (const auto& j : lines) {
    try {
      out.push_back(transcript_from_record(j));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSchemaVersionMismatch) throw;
      throw Error(ErrorCode::kCorruptLog,
                  file + " line " + std::to_string(j.value("__line", 0)) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<game::EpisodeTranscript> RunStore::read_episodes(const std::string& run_id) const {
  return read_transcripts(read(run_id, Artifact::kEpisodes), artifact_file(Artifact::kEpisodes));
}

std::vector<game::EpisodeTranscript> RunStore::read_human_sessions(
    const std::string& run_id) const {
  return read_transcripts(read(run_id, Artifact::kHumanSessions),
                          artifact_file(Artifact::kHumanSessions));
}

std::vector<experience::PolicyDocument> RunStore::read_policies(const std::string& run_id) const {
  std::vector<experience::PolicyDocument> out;
  for (const auto& j : read(run_id, Artifact::kPolicies)) {
    try {
      out.push_back(policy_from_json(j));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kCorruptLog, "policies.jsonl line " +
                                              std::to_string(j.value("__line", 0)) + ": " +
                                              e.what());
    }
  }
  return out;
}

std::vector<json> RunStore::read_records(const std::string& run_id) const {
  return read(run_id, Artifact::kExperience);
}

json policy_to_json(const experience::PolicyDocument& p) {
  return {{"id", p.id},
          {"text", p.text},
          {"provenance", experience::provenance_name(p.provenance)},
          {"version", p.version},
          {"sources", p.sources},
          {"token_length", p.token_length}};
}

experience::PolicyDocument policy_from_json(const json& j) {
  experience::PolicyDocument p;
  p.id = j.at("id").get<std::string>();
  p.text = j.at("text").get<std::string>();
  p.provenance = experience::parse_provenance(j.at("provenance").get<std::string>());
  p.version = j.at("version").get<int>();
  p.sources = j.at("sources").get<std::vector<std::string>>();
  p.token_length = j.at("token_length").get<int>();
  return p;
}

}  // namespace ttl::storage
