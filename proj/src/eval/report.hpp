#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "storage/run_store.hpp"

namespace ttl::eval {

// Reward of a stored episode recomputed from its turns and metadata alone.
double rescore(const game::EpisodeTranscript& t);

// Everything a report is derived from, as read back from a run directory.
struct RunData {
  storage::RunManifest manifest;
  std::vector<game::EpisodeTranscript> episodes;
  std::vector<experience::PolicyDocument> policies;
  std::vector<nlohmann::json> records;
  std::vector<game::EpisodeTranscript> human_sessions;
};

RunData load_run(const storage::RunStore& store, const std::string& run_id);

// Re-scores every episode (Error(kCorruptLog) on a reward that does not
// match its turns) and renders the report files: report.csv, metrics.json,
// and for incremental runs rewards.csv and curves.json. Human session
// transcripts add one overlay series per participant to curves.json.
std::map<std::string, std::string> build_reports(const RunData& data);

// Writes the files into `dir`; returns their paths in name order.
std::vector<std::filesystem::path> write_reports(const std::map<std::string, std::string>& files,
                                                 const std::filesystem::path& dir);

struct ParticipantCurve {
  std::string participant_id;
  std::string session_id;
  std::vector<double> rewards;  // per round, in round order
};

std::vector<ParticipantCurve> participant_curves(
    const std::vector<game::EpisodeTranscript>& human_sessions);

}  // namespace ttl::eval
