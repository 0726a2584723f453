#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ttl {

// Lower-case hex SHA-256 (64 characters).
std::string sha256_hex(std::string_view data);

// Stable 64-bit FNV-1a; used for seed derivation, never for cache keys.
std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace ttl
