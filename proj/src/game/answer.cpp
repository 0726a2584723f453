#include "game/answer.hpp"

#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::game {

namespace {

std::size_t rfind_ci(const std::string& haystack, std::string_view needle,
                     std::size_t before) {
  if (needle.size() > before) return std::string::npos;
  for (std::size_t i = before - needle.size() + 1; i-- > 0;) {
    if (text::iequals(std::string_view(haystack).substr(i, needle.size()), needle)) {
      return i;
    }
  }
  return std::string::npos;
}

}  // namespace

ParsedAnswer parse_answer(std::string_view raw_text) {
  const std::string raw(raw_text);
  const std::size_t close = rfind_ci(raw, kCloseTag, raw.size());
  if (close == std::string::npos) {
    throw Error(ErrorCode::kMissingAnswerTags, "response has no <answer></answer> pair");
  }
  const std::size_t open = rfind_ci(raw, kOpenTag, close);
  if (open == std::string::npos) {
    throw Error(ErrorCode::kMissingAnswerTags, "response has no <answer></answer> pair");
  }
  ParsedAnswer parsed;
  parsed.answer = text::trim(raw.substr(open + kOpenTag.size(), close - open - kOpenTag.size()));
  if (parsed.answer.empty()) {
    throw Error(ErrorCode::kEmptyAnswer, "answer tags enclose no content");
  }
  parsed.reasoning = text::trim(raw.substr(0, open));
  return parsed;
}

std::string wrap_answer(std::string_view answer) {
  std::string out(kOpenTag);
  out += answer;
  out += kCloseTag;
  return out;
}

}  // namespace ttl::game
