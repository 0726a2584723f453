#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ttl::twentyq {

inline constexpr std::size_t kStandardLexiconSize = 157;

// Ordered candidate words, unique after case folding. Immutable once built
// and shared across episodes.
class Lexicon {
 public:
  // One word per line; blank lines are ignored. Throws Error(kInvalidArgument)
  // on duplicates (case-insensitive) or an empty list.
  static Lexicon from_text(std::string_view text);
  static Lexicon from_file(const std::string& path);

  // The bundled 157-word list.
  static std::shared_ptr<const Lexicon> bundled();

  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  const std::string& at(std::size_t i) const { return words_.at(i); }

  // Case-insensitive exact lookup; returns the canonical spelling.
  std::optional<std::string> find(std::string_view word) const;
  std::optional<std::size_t> index_of(std::string_view word) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> folded_;
};

}  // namespace ttl::twentyq
