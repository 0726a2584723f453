#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "undercover/engine.hpp"

namespace ttl::undercover {

// {"schema": 1, "pairs": [{"normal": ..., "difference": ...}, ...]}
std::vector<WordPair> parse_word_pairs(std::string_view json_text);
std::vector<WordPair> load_word_pairs(const std::filesystem::path& path);
const std::vector<WordPair>& bundled_word_pairs();

// One pair per case so every condition plays the same matches.
const WordPair& pair_for_case(const std::vector<WordPair>& pairs, std::int64_t case_index);

}  // namespace ttl::undercover
