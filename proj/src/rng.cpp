// SPDX-License-Identifier: Apache-2.0

#include "gossip_loc/rng.hpp"

namespace gossip_loc {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Seed derive_seed(Seed base, std::uint64_t tag) noexcept {
  return mix64(base + 0x9E3779B97F4A7C15ULL * (tag + 1));
}

}  // namespace gossip_loc
