#include "experience/records.hpp"

#include "experience/tokenizer.hpp"
#include "util/assets.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::experience {

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::kRuleOnly: return "rule_only";
    case Provenance::kExperienceDerived: return "experience_derived";
    case Provenance::kHumanAuthored: return "human_authored";
  }
  return "rule_only";
}

Provenance parse_provenance(std::string_view s) {
  if (s == "rule_only") return Provenance::kRuleOnly;
  if (s == "experience_derived") return Provenance::kExperienceDerived;
  if (s == "human_authored") return Provenance::kHumanAuthored;
  throw Error(ErrorCode::kInvalidArgument, "unknown provenance '" + std::string(s) + "'");
}

void PolicyDocument::validate() const {
  if (text::trim(text).empty()) throw Error(ErrorCode::kInvalidArgument, "policy text is empty");
  const bool derived = provenance == Provenance::kExperienceDerived;
  if (derived == sources.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "policy sources must be non-empty exactly when experience-derived");
  }
  if (version < 1) throw Error(ErrorCode::kInvalidArgument, "policy version must be >= 1");
}

PolicyDocument make_policy(std::string id, std::string text, Provenance provenance,
                           std::vector<std::string> sources, int version) {
  PolicyDocument d;
  d.id = std::move(id);
  d.text = text::trim(text);
  d.provenance = provenance;
  d.sources = std::move(sources);
  d.version = version;
  d.token_length = default_tokenizer().count(d.text);
  d.validate();
  return d;
}

GameRendering render_game(const game::EpisodeTranscript& t) {
  GameRendering g;
  std::vector<std::string> lines;
  if (t.environment == game::EnvironmentId::kTwentyQ) {
    const std::string rank = t.meta("solved_rank");
    g.summary = "Secret word: " + t.meta("secret") + ". " +
                (rank.empty() ? "Not guessed within the question limit."
                              : "Guessed at question " + rank + ".");
    int i = 0;
    for (const auto& turn : t.turns) {
      lines.push_back("Q" + std::to_string(++i) + ": " + turn.answer + " -> " + turn.feedback);
    }
  } else {
    auto labels = text::split(t.meta("role_labels", "difference/normal"), '/');
    const bool diff = t.meta("test_side") == "difference";
    std::string side = diff ? labels.front() : labels.back();
    std::string word = diff ? t.meta("pair_difference") : t.meta("pair_normal");
    std::string outcome = t.meta("outcome");
    g.summary = "You were " + t.meta("test_seat") + ", a " + side + " player with the word " +
                word + ". Outcome: " +
                (outcome == "normals_win"       ? labels.back() + " players won."
                 : outcome == "difference_wins" ? "the " + labels.front() + " player won."
                                                : "unfinished.");
    for (const auto& turn : t.turns) {
      lines.push_back(turn.actor_id + " [" + turn.phase + "]: " + turn.answer);
    }
  }
  if (t.failed()) g.summary += " The game ended early because of an invalid reply.";
  g.turns = lines.empty() ? "(no actions)" : text::join(lines, "\n");
  return g;
}

std::string render_experience_game(const ExperienceRecord& r, int number) {
  GameRendering g = render_game(r.transcript);
  return text::render(assets::get("templates/experience_game.txt"),
                      {{"number", std::to_string(number)},
                       {"summary", g.summary},
                       {"turns", g.turns},
                       {"reward", text::format_exact(r.reward)},
                       {"reflection", r.reflection}});
}

std::string render_experience_section(const std::vector<ExperienceRecord>& records) {
  if (records.empty()) return {};
  std::vector<std::string> blocks;
  for (std::size_t i = 0; i < records.size(); ++i) {
    blocks.push_back(render_experience_game(records[i], static_cast<int>(i) + 1));
  }
  return text::render(assets::get("templates/experience_section.txt"),
                      {{"games", text::join(blocks, "\n\n")}});
}

}  // namespace ttl::experience
