#pragma once

#include <string>
#include <string_view>

namespace ttl::game {

inline constexpr std::string_view kOpenTag = "<answer>";
inline constexpr std::string_view kCloseTag = "</answer>";

struct ParsedAnswer {
  std::string reasoning;  // text before the chosen pair, trimmed
  std::string answer;     // pair content, trimmed
};

// Takes the last well-formed <answer>...</answer> pair (tags matched
// case-insensitively). Throws Error(kMissingAnswerTags) when there is no
// pair and Error(kEmptyAnswer) when the pair holds only whitespace.
ParsedAnswer parse_answer(std::string_view raw_text);

std::string wrap_answer(std::string_view answer);

}  // namespace ttl::game
