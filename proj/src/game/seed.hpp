#pragma once

#include <cstdint>

#include "game/types.hpp"

namespace ttl::game {

// Per-episode seed from the manifest's master seed. The condition is not an
// input, so every condition and arm replays the same case with the same seed.
std::uint64_t derive_seed(std::uint64_t master_seed, EnvironmentId env,
                          std::int64_t case_index);

// Generic sub-stream derivation, e.g. per-seat or per-cycle streams.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view label,
                          std::int64_t index);

}  // namespace ttl::game
