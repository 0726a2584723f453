#pragma once

#include <cstddef>

namespace ttl::assets::detail {

struct AssetEntry {
  const char* name;
  const char* content;
};

extern const AssetEntry kEntries[];
extern const std::size_t kEntryCount;

}  // namespace ttl::assets::detail
