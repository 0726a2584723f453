#include "util/assets.hpp"

#include "util/assets_table.hpp"
#include "util/error.hpp"
#include "util/hash.hpp"

namespace ttl::assets {

std::string_view get(std::string_view name) {
  for (std::size_t i = 0; i < detail::kEntryCount; ++i) {
    if (name == detail::kEntries[i].name) return detail::kEntries[i].content;
  }
  throw Error(ErrorCode::kMissingFile,
              "no bundled asset named '" + std::string(name) + "'");
}

bool contains(std::string_view name) {
  for (std::size_t i = 0; i < detail::kEntryCount; ++i) {
    if (name == detail::kEntries[i].name) return true;
  }
  return false;
}

std::vector<std::string> names() {
  std::vector<std::string> out;
  out.reserve(detail::kEntryCount);
  for (std::size_t i = 0; i < detail::kEntryCount; ++i) {
    out.emplace_back(detail::kEntries[i].name);
  }
  return out;
}

std::string templates_digest() {
  std::string joined;
  for (const auto& name : names()) {
    if (name.rfind("templates/", 0) != 0) continue;
    joined += name;
    joined += '\0';
    joined += get(name);
    joined += '\0';
  }
  return sha256_hex(joined);
}

}  // namespace ttl::assets
