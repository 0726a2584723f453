#include <json.hpp>

#include "game/answer.hpp"
#include "game/types.hpp"
#include "util/error.hpp"

namespace ttl::game {

using nlohmann::json;

std::string_view environment_name(EnvironmentId id) {
  switch (id) {
    case EnvironmentId::kTwentyQ: return "twentyq";
    case EnvironmentId::kUndercover: return "undercover";
  }
  return "unknown";
}

EnvironmentId parse_environment(std::string_view name) {
  if (name == "twentyq") return EnvironmentId::kTwentyQ;
  if (name == "undercover") return EnvironmentId::kUndercover;
  throw Error(ErrorCode::kConfigError,
              "env: expected \"twentyq\" or \"undercover\", got \"" +
                  std::string(name) + "\"");
}

std::string_view condition_name(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::kBaseline: return "baseline";
    case ConditionKind::kFullExperience: return "full_experience";
    case ConditionKind::kRulePolicy: return "rule_policy";
    case ConditionKind::kExperiencePolicy: return "experience_policy";
    case ConditionKind::kHumanPolicy: return "human_policy";
  }
  return "unknown";
}

ConditionKind parse_condition(std::string_view name) {
  for (auto kind : kAllConditions) {
    if (condition_name(kind) == name) return kind;
  }
  throw Error(ErrorCode::kConfigError,
              "conditions: unknown condition \"" + std::string(name) + "\"");
}

void ConditionSpec::validate() const {
  if (kind == ConditionKind::kBaseline && !attachment.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "baseline condition takes no attachment");
  }
  if (kind != ConditionKind::kBaseline && attachment.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(condition_name(kind)) + " condition requires an attachment");
  }
}

void EpisodeTranscript::set_reward(double value) {
  if (reward) {
    throw Error(ErrorCode::kInvalidArgument,
                "episode " + episode_id + ": reward already set");
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "episode " + episode_id + ": reward outside [0, 1]");
  }
  reward = value;
}

bool EpisodeTranscript::failed() const { return meta("failed") == "true"; }

std::string EpisodeTranscript::meta(const std::string& key,
                                    const std::string& fallback) const {
  auto it = metadata.find(key);
  return it == metadata.end() ? fallback : it->second;
}

std::string to_json_line(const EpisodeTranscript& t) {
  json doc;
  doc["schema"] = kTranscriptSchemaVersion;
  doc["episode_id"] = t.episode_id;
  doc["environment_id"] = environment_name(t.environment);
  doc["condition"] = {{"kind", condition_name(t.condition.kind)},
                      {"attachment", t.condition.attachment}};
  doc["case_index"] = t.case_index;
  auto& turns = doc["turns"] = json::array();
  for (const auto& turn : t.turns) {
    turns.push_back({{"actor_id", turn.actor_id},
                     {"phase", turn.phase},
                     {"raw_response", turn.raw_response},
                     {"reasoning", turn.reasoning},
                     {"answer", turn.answer},
                     {"feedback", turn.feedback}});
  }
  doc["reward"] = t.reward ? json(*t.reward) : json(nullptr);
  // Seeds are 64-bit; JSON numbers are not, so the seed travels as text.
  doc["seed"] = std::to_string(t.seed);
  doc["metadata"] = t.metadata;
  return doc.dump();
}

EpisodeTranscript transcript_from_json_line(std::string_view line) {
  json doc = json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::kCorruptLog, "transcript record is not valid JSON");
  }
  int schema = doc.value("schema", 0);
  if (schema > kTranscriptSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "transcript schema " + std::to_string(schema) +
                    " is newer than supported " +
                    std::to_string(kTranscriptSchemaVersion));
  }
  try {
    EpisodeTranscript t;
    t.episode_id = doc.at("episode_id").get<std::string>();
    t.environment = parse_environment(doc.at("environment_id").get<std::string>());
    t.condition.kind = parse_condition(doc.at("condition").at("kind").get<std::string>());
    t.condition.attachment = doc.at("condition").value("attachment", "");
    t.case_index = doc.at("case_index").get<std::int64_t>();
    for (const auto& turn : doc.at("turns")) {
      t.turns.push_back({turn.at("actor_id").get<std::string>(),
                         turn.value("phase", ""),
                         turn.at("raw_response").get<std::string>(),
                         turn.at("reasoning").get<std::string>(),
                         turn.at("answer").get<std::string>(),
                         turn.at("feedback").get<std::string>()});
    }
    if (!doc.at("reward").is_null()) t.reward = doc.at("reward").get<double>();
    t.seed = std::stoull(doc.at("seed").get<std::string>());
    t.metadata = doc.at("metadata").get<std::map<std::string, std::string>>();
    return t;
  } catch (const Error& e) {
    throw Error(ErrorCode::kCorruptLog, std::string("transcript record: ") + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kCorruptLog, std::string("transcript record: ") + e.what());
  }
}

std::optional<std::string> validate_transcript(const EpisodeTranscript& t) {
  for (std::size_t i = 0; i < t.turns.size(); ++i) {
    const auto& turn = t.turns[i];
    const std::string where = "turn " + std::to_string(i + 1) + ": ";
    if (turn.actor_id.empty()) return where + "empty actor_id";
    if (turn.answer.empty()) return where + "empty answer";
    if (turn.answer.find("<answer>") != std::string::npos ||
        turn.answer.find("</answer>") != std::string::npos) {
      return where + "answer contains tag markup";
    }
  }
  if (!t.reward) return std::string("reward not set");
  if (*t.reward < 0.0 || *t.reward > 1.0) return std::string("reward outside [0, 1]");
  return std::nullopt;
}

}  // namespace ttl::game
