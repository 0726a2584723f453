#include "twentyq/oracle.hpp"

#include <algorithm>

#include "game/answer.hpp"
#include "game/episode.hpp"
#include "twentyq/scoring.hpp"
#include "util/assets.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::twentyq {

std::string_view answer_name(OracleAnswer a) {
  switch (a) {
    case OracleAnswer::kYes: return "Yes";
    case OracleAnswer::kNo: return "No";
    case OracleAnswer::kInvalid: return "Invalid";
  }
  return "Invalid";
}

ScriptedOracle::ScriptedOracle(std::shared_ptr<const Lexicon> lexicon)
    : lexicon_(std::move(lexicon)) {}

OracleAnswer ScriptedOracle::answer(const std::string& secret,
                                    const std::string& question) {
  if (auto guess = classify_identity_guess(question, *lexicon_)) {
    return text::iequals(*guess, secret) ? OracleAnswer::kYes : OracleAnswer::kNo;
  }
  if (auto members = parse_membership_question(question, *lexicon_)) {
    bool in = std::any_of(members->begin(), members->end(),
                          [&](const std::string& w) { return text::iequals(w, secret); });
    return in ? OracleAnswer::kYes : OracleAnswer::kNo;
  }
  return OracleAnswer::kInvalid;
}

std::optional<OracleAnswer> map_oracle_reply(std::string_view reply) {
  std::string r = text::to_lower(text::trim(reply));
  while (!r.empty() && (r.back() == '.' || r.back() == '!')) r.pop_back();
  if (r == "yes") return OracleAnswer::kYes;
  if (r == "no") return OracleAnswer::kNo;
  if (r == "invalid") return OracleAnswer::kInvalid;
  return std::nullopt;
}

LlmOracle::LlmOracle(std::shared_ptr<llm::Provider> provider, std::string rules)
    : provider_(std::move(provider)) {
  if (!provider_) throw Error(ErrorCode::kInvalidArgument, "LLM oracle requires a provider");
  system_prompt_ = text::render(assets::get("templates/twentyq_oracle_system.txt"),
                                {{"rules", text::trim(rules)}});
}

OracleAnswer LlmOracle::answer(const std::string& secret, const std::string& question) {
  llm::Messages messages{
      {"system", system_prompt_},
      {"user", text::render(assets::get("templates/twentyq_oracle_user.txt"),
                            {{"secret", secret}, {"question", question}})}};
  std::string last;
  for (int attempt = 0; attempt < 2; ++attempt) {
    llm::ChatResponse resp = provider_->complete(messages);
    last = resp.text;
    try {
      if (auto mapped = map_oracle_reply(game::parse_answer(resp.text).answer)) {
        return *mapped;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMissingAnswerTags && e.code() != ErrorCode::kEmptyAnswer) {
        throw;
      }
    }
    messages.push_back({"assistant", resp.text});
    messages.push_back({"user", game::tag_reminder("Yes, No or Invalid")});
  }
  throw Error(ErrorCode::kOracleFailure,
              "oracle reply not mappable to Yes/No/Invalid: " + last.substr(0, 80));
}

}  // namespace ttl::twentyq
