#include "game/seed.hpp"

#include <string>

#include "util/hash.hpp"

namespace ttl::game {

std::uint64_t derive_seed(std::uint64_t master_seed, EnvironmentId env,
                          std::int64_t case_index) {
  return derive_seed(master_seed, environment_name(env), case_index);
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view label,
                          std::int64_t index) {
  std::uint64_t h = fnv1a64(label, mix64(parent));
  return mix64(h ^ mix64(static_cast<std::uint64_t>(index)));
}

}  // namespace ttl::game
