#include "twentyq/lexicon.hpp"

#include "util/assets.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::twentyq {

Lexicon Lexicon::from_text(std::string_view content) {
  Lexicon lex;
  for (const auto& line : text::split(content, '\n')) {
    std::string word = text::squash_spaces(line);
    if (word.empty()) continue;
    std::string folded = text::to_lower(word);
    if (!lex.folded_.emplace(folded, lex.words_.size()).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate lexicon entry: " + word);
    }
    lex.words_.push_back(std::move(word));
  }
  if (lex.words_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "lexicon is empty");
  }
  return lex;
}

Lexicon Lexicon::from_file(const std::string& path) {
  return from_text(text::read_file(path));
}

std::shared_ptr<const Lexicon> Lexicon::bundled() {
  static const std::shared_ptr<const Lexicon> lexicon =
      std::make_shared<const Lexicon>(from_text(assets::get("twentyq/lexicon.txt")));
  return lexicon;
}

std::optional<std::size_t> Lexicon::index_of(std::string_view word) const {
  auto it = folded_.find(text::to_lower(text::squash_spaces(word)));
  if (it == folded_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> Lexicon::find(std::string_view word) const {
  if (auto idx = index_of(word)) return words_[*idx];
  return std::nullopt;
}

}  // namespace ttl::twentyq
