#include "undercover/word_pairs.hpp"

#include <json.hpp>

#include "util/assets.hpp"
#include "util/error.hpp"
#include "util/text.hpp"

namespace ttl::undercover {

std::vector<WordPair> parse_word_pairs(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("word pairs: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("pairs") || !doc["pairs"].is_array()) {
    throw Error(ErrorCode::kConfigError, "word pairs: expected an object with a 'pairs' array");
  }
  const int schema = doc.value("schema", 1);
  if (schema > 1) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "word pairs schema " + std::to_string(schema) + " is newer than 1");
  }
  std::vector<WordPair> out;
  const auto& pairs = doc["pairs"];
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    const std::string where = "pairs[" + std::to_string(i) + "]";
    if (!p.is_object() || !p.contains("normal") || !p.contains("difference") ||
        !p["normal"].is_string() || !p["difference"].is_string()) {
      throw Error(ErrorCode::kConfigError,
                  "word pairs: " + where + " needs string fields normal and difference");
    }
    WordPair wp{text::trim(p["normal"].get<std::string>()),
                text::trim(p["difference"].get<std::string>())};
    if (wp.normal.empty() || wp.difference.empty() || text::iequals(wp.normal, wp.difference)) {
      throw Error(ErrorCode::kConfigError,
                  "word pairs: " + where + " must hold two distinct non-empty words");
    }
    out.push_back(std::move(wp));
  }
  if (out.empty()) throw Error(ErrorCode::kConfigError, "word pairs: no pairs");
  return out;
}

std::vector<WordPair> load_word_pairs(const std::filesystem::path& path) {
  return parse_word_pairs(text::read_file(path));
}

const std::vector<WordPair>& bundled_word_pairs() {
  static const std::vector<WordPair> pairs =
      parse_word_pairs(assets::get("undercover/word_pairs.json"));
  return pairs;
}

const WordPair& pair_for_case(const std::vector<WordPair>& pairs, std::int64_t case_index) {
  if (pairs.empty()) throw Error(ErrorCode::kInvalidArgument, "no word pairs");
  if (case_index < 0) throw Error(ErrorCode::kInvalidArgument, "negative case index");
  return pairs[static_cast<std::size_t>(case_index) % pairs.size()];
}

}  // namespace ttl::undercover
