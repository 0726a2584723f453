#include "experience/tokenizer.hpp"

#include <cctype>

namespace ttl::experience {

int ApproxTokenizer::count(std::string_view text) const {
  int tokens = 0;
  std::size_t run = 0;
  auto flush = [&] {
    tokens += static_cast<int>((run + kPieceLength - 1) / kPieceLength);
    run = 0;
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    // Bytes >= 0x80 belong to UTF-8 letters; treat them as word characters.
    if (std::isalnum(c) || c >= 0x80) {
      ++run;
      continue;
    }
    flush();
    if (!std::isspace(c)) ++tokens;
  }
  flush();
  return tokens;
}

const Tokenizer& default_tokenizer() {
  static const ApproxTokenizer tok;
  return tok;
}

}  // namespace ttl::experience
