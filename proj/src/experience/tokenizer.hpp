#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace ttl::experience {

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual int count(std::string_view text) const = 0;
  virtual std::string name() const = 0;
};

// Provider-free approximation of subword tokenizers: each run of letters or
// digits costs one token per started block of kPieceLength characters, and
// every other non-space character is a token of its own.
class ApproxTokenizer final : public Tokenizer {
 public:
  static constexpr int kPieceLength = 7;

  int count(std::string_view text) const override;
  std::string name() const override { return "approx-v1"; }
};

const Tokenizer& default_tokenizer();

}  // namespace ttl::experience
