#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "llm/provider.hpp"
#include "twentyq/lexicon.hpp"

namespace ttl::twentyq {

enum class OracleAnswer { kYes, kNo, kInvalid };

std::string_view answer_name(OracleAnswer a);

class Oracle {
 public:
  virtual ~Oracle() = default;

  // Throws Error(kOracleFailure) when no answer can be produced.
  virtual OracleAnswer answer(const std::string& secret, const std::string& question) = 0;

  virtual std::string kind() const = 0;
};

// Answers identity guesses and "is it one of: ..." questions exactly; every
// other question is Invalid. Holds no world knowledge.
class ScriptedOracle final : public Oracle {
 public:
  explicit ScriptedOracle(std::shared_ptr<const Lexicon> lexicon);

  OracleAnswer answer(const std::string& secret, const std::string& question) override;
  std::string kind() const override { return "scripted"; }

 private:
  std::shared_ptr<const Lexicon> lexicon_;
};

// Asks the backbone model, given the rules and the secret, to reply with a
// tagged Yes/No/Invalid. One reprompt on an unmappable reply.
class LlmOracle final : public Oracle {
 public:
  LlmOracle(std::shared_ptr<llm::Provider> provider, std::string rules);

  OracleAnswer answer(const std::string& secret, const std::string& question) override;
  std::string kind() const override { return "llm"; }

 private:
  std::shared_ptr<llm::Provider> provider_;
  std::string system_prompt_;
};

// Maps "Yes"/"no."/"INVALID" etc.; nullopt for anything else.
std::optional<OracleAnswer> map_oracle_reply(std::string_view reply);

}  // namespace ttl::twentyq
