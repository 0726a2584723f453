#include "eval/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "agents/prompt.hpp"
#include "eval/metrics.hpp"
#include "eval/protocols.hpp"
#include "experience/learning.hpp"
#include "twentyq/env.hpp"
#include "twentyq/scoring.hpp"
#include "undercover/env.hpp"
#include "util/assets.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::eval {

using nlohmann::json;

double rescore(const game::EpisodeTranscript& t) {
  if (t.environment == game::EnvironmentId::kTwentyQ) {
    return twentyq::score_transcript(t, *twentyq::Lexicon::bundled());
  }
  return undercover::score_transcript(t);
}

RunData load_run(const storage::RunStore& store, const std::string& run_id) {
  RunData d;
  d.manifest = store.manifest(run_id);
  d.episodes = store.read_episodes(run_id);
  d.policies = store.read_policies(run_id);
  d.records = store.read_records(run_id);
  d.human_sessions = store.read_human_sessions(run_id);
  return d;
}

std::vector<ParticipantCurve> participant_curves(
    const std::vector<game::EpisodeTranscript>& human_sessions) {
  std::map<std::string, std::map<std::int64_t, double>> by_session;
  std::map<std::string, std::string> participant;
  for (const auto& t : human_sessions) {
    const std::string sid = t.meta("session_id");
    by_session[sid][t.case_index] = t.reward.value_or(0.0);
    participant[sid] = t.meta("participant_id");
  }
  std::vector<ParticipantCurve> out;
  for (const auto& [sid, rounds] : by_session) {
    ParticipantCurve c{participant[sid], sid, {}};
    for (const auto& [round, r] : rounds) c.rewards.push_back(r);
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

json points_json(const CumulativeCurve& c) {
  json pts = json::array();
  for (std::size_t i = 0; i < c.cumulative.size(); ++i) {
    pts.push_back({{"t", i + 1}, {"r", c.per_round[i]}, {"R", c.cumulative[i]}});
  }
  return pts;
}

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string rules_for(const storage::RunManifest& m) {
  if (m.environment == game::EnvironmentId::kTwentyQ) return twentyq::rules_text();
  undercover::RoleLabels labels;
  const auto& cfg = m.config;
  if (cfg.contains("role_labels")) {
    labels.difference = cfg["role_labels"].value("difference", labels.difference);
    labels.normal = cfg["role_labels"].value("normal", labels.normal);
  }
  return undercover::rules_text(labels);
}

json context_tokens(const RunData& d, const std::vector<game::EpisodeTranscript>& episodes) {
  const auto& tok = experience::default_tokenizer();
  json out{{"tokenizer", tok.name()}, {"instruction", tok.count(text::trim(rules_for(d.manifest)))}};
  json policies = json::object();
  for (const auto& p : d.policies) {
    if (p.provenance == experience::Provenance::kExperienceDerived && p.version > 1) continue;
    policies[p.id] = tok.count(
        text::render(assets::get("templates/policy_section.txt"), {{"policy", p.text}}));
  }
  out["policy"] = policies;
  std::vector<experience::ExperienceRecord> records;
  for (const auto& r : d.records) {
    const std::string eid = r.value("episode_id", "");
    auto it = std::find_if(episodes.begin(), episodes.end(),
                           [&](const game::EpisodeTranscript& e) { return e.episode_id == eid; });
    if (it == episodes.end() || eid.rfind("fixed/", 0) != 0) continue;
    records.push_back(experience::make_record(*it, r.value("reflection", "")));
  }
  out["experience"] = tok.count(experience::render_experience_section(records));
  return out;
}

}  // namespace

std::map<std::string, std::string> build_reports(const RunData& d) {
  const auto& m = d.manifest;
  const bool tq = m.environment == game::EnvironmentId::kTwentyQ;

  // Rewards are recomputed, never trusted from the log.
  std::vector<game::EpisodeTranscript> episodes = d.episodes;
  for (auto& e : episodes) {
    const double r = rescore(e);
    if (!e.reward || *e.reward != r) {
      throw Error(ErrorCode::kCorruptLog, "episode " + e.episode_id + ": stored reward " +
                                              (e.reward ? text::format_exact(*e.reward) : "none") +
                                              " but its turns score " + text::format_exact(r));
    }
  }

  std::map<std::string, std::string> files;
  json metrics{{"schema", storage::kStoreSchemaVersion},
               {"run_id", m.run_id},
               {"protocol", m.protocol},
               {"environment_id", game::environment_name(m.environment)},
               {"metric", tq ? "ndcg@20" : "win_rate"},
               {"episodes", episodes.size()}};
  int failures = 0;
  for (const auto& e : episodes) failures += e.failed() ? 1 : 0;
  metrics["failures"] = failures;
  if (tq) metrics["optimal_reference"] = twentyq::optimal_expected_ndcg(twentyq::kStandardLexiconSize);

  std::optional<json> curves_doc;
  auto ensure_curves = [&]() -> json& {
    if (!curves_doc) {
      curves_doc = json{{"schema", storage::kStoreSchemaVersion},
                        {"run_id", m.run_id},
                        {"arms", json::array()},
                        {"human_overlays", json::array()},
                        {"optimal_reference",
                         tq ? json(twentyq::optimal_expected_ndcg(twentyq::kStandardLexiconSize))
                            : json(nullptr)}};
    }
    return *curves_doc;
  };

  if (m.protocol == "fixed") {
    std::vector<game::EpisodeTranscript> tests;
    int experience_eps = 0;
    for (const auto& e : episodes) {
      if (e.episode_id.rfind("fixed/experience/", 0) == 0) {
        ++experience_eps;
      } else {
        tests.push_back(e);
      }
    }
    const int M = m.config.value("test_cases", 32);
    const double frac = m.config.value("max_failure_fraction", 0.5);
    auto conditions = summarize_conditions(tests, M, frac);

    std::string csv = "condition,attachment,mean_reward,improvement_pct,episodes,failures,status\n";
    json rows = json::array();
    for (const auto& c : conditions) {
      const bool base = c.condition.kind == game::ConditionKind::kBaseline;
      csv += std::string(game::condition_name(c.condition.kind)) + "," + c.condition.attachment +
             "," + (c.mean ? text::format_fixed(*c.mean, 4) : "NA") + "," +
             (base ? "" : format_improvement(c.improvement_pct)) + "," +
             std::to_string(c.episodes) + "," + std::to_string(c.failures) + "," +
             (c.aborted ? "aborted" : "ok") + "\n";
      rows.push_back({{"condition", game::condition_name(c.condition.kind)},
                      {"attachment", c.condition.attachment},
                      {"mean", opt_number(c.mean)},
                      {"improvement_pct", opt_number(c.improvement_pct)},
                      {"episodes", c.episodes},
                      {"failures", c.failures},
                      {"aborted", c.aborted}});
    }
    files["report.csv"] = csv;
    metrics["conditions"] = rows;
    metrics["experience_episodes"] = experience_eps;
    metrics["context_tokens"] = context_tokens(d, episodes);
  } else {
    RewardSeries series = series_from_episodes(episodes);
    auto curves = cumulative_curves(series);
    std::string rewards_csv = "arm,sample,round,reward\n";
    for (const auto& [arm, rows] : series.rewards) {
      for (std::size_t s = 0; s < rows.size(); ++s) {
        for (std::size_t t = 0; t < rows[s].size(); ++t) {
          rewards_csv += arm + "," + std::to_string(s) + "," + std::to_string(t) + "," +
                         text::format_exact(rows[s][t]) + "\n";
        }
      }
    }
    files["rewards.csv"] = rewards_csv;

    std::map<std::string, int> arm_failures;
    std::map<std::string, std::vector<double>> arm_rewards;
    for (const auto& e : episodes) {
      if (auto slot = parse_incremental_id(e.episode_id)) {
        arm_failures[slot->arm] += e.failed() ? 1 : 0;
        arm_rewards[slot->arm].push_back(e.reward.value_or(0.0));
      }
    }
    std::map<std::string, int> versions;
    for (const auto& p : d.policies) {
      if (p.provenance == experience::Provenance::kExperienceDerived) {
        versions[text::split(p.id, '/').size() > 1 ? text::split(p.id, '/')[1] : p.id]++;
      }
    }

    std::string csv = "arm,samples,rounds,mean_reward,final_cumulative_reward,episodes,failures\n";
    json arms = json::array();
    json& cdoc = ensure_curves();
    for (const char* arm : {kBaselineArm, kExperienceArm}) {
      auto it = curves.find(arm);
      if (it == curves.end()) continue;
      const auto& c = it->second;
      const double mean_r = mean(arm_rewards[arm]);
      csv += std::string(arm) + "," + std::to_string(series.samples(arm)) + "," +
             std::to_string(series.rounds()) + "," + text::format_fixed(mean_r, 4) + "," +
             text::format_fixed(c.cumulative.back(), 4) + "," +
             std::to_string(arm_rewards[arm].size()) + "," + std::to_string(arm_failures[arm]) +
             "\n";
      arms.push_back({{"arm", arm},
                      {"samples", series.samples(arm)},
                      {"rounds", series.rounds()},
                      {"mean", mean_r},
                      {"final_cumulative", c.cumulative.back()},
                      {"episodes", arm_rewards[arm].size()},
                      {"failures", arm_failures[arm]}});
      cdoc["arms"].push_back({{"arm", arm}, {"points", points_json(c)}});
    }
    files["report.csv"] = csv;
    metrics["arms"] = arms;
    metrics["policy_versions"] = versions;
  }

  if (!d.human_sessions.empty()) {
    json& cdoc = ensure_curves();
    for (const auto& pc : participant_curves(d.human_sessions)) {
      cdoc["human_overlays"].push_back({{"participant_id", pc.participant_id},
                                        {"session_id", pc.session_id},
                                        {"points", points_json(running_curve(pc.rewards))}});
    }
  }
  if (curves_doc) files["curves.json"] = curves_doc->dump(2) + "\n";
  files["metrics.json"] = metrics.dump(2) + "\n";
  return files;
}

std::vector<std::filesystem::path> write_reports(const std::map<std::string, std::string>& files,
                                                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const auto& [name, content] : files) {
    text::write_file(dir / name, content);
    out.push_back(dir / name);
  }
  return out;
}

}  // namespace ttl::eval
