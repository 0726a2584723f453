#pragma once

#include <string>
#include <string_view>
#include <vector>

// Bundled text assets (lexicon, rules, human policies, prompt templates),
// compiled into the library from data/.
namespace ttl::assets {

// Throws Error(kMissingFile) for unknown names.
std::string_view get(std::string_view name);

bool contains(std::string_view name);

std::vector<std::string> names();

// Hex SHA-256 over every prompt template, in name order. Pinned into run
// manifests so results cite the exact templates used.
std::string templates_digest();

}  // namespace ttl::assets
