// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "gossip_loc/types.hpp"

namespace gossip_loc {

using Rng = std::mt19937_64;

/// Independent streams derived from one base seed. Each stream gets its own
/// fixed offset so that, e.g., changing the horizon never perturbs the noise.
enum class Stream : std::uint64_t {
  Graph = 1,
  Truth = 2,
  Noise = 3,
  Edges = 4,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// derive_seed(base, tag) = mix64(base + 0x9E3779B97F4A7C15 * (tag + 1)).
Seed derive_seed(Seed base, std::uint64_t tag) noexcept;

inline Seed stream_seed(Seed base, Stream s) noexcept {
  return derive_seed(base, static_cast<std::uint64_t>(s));
}

/// Seed of Monte Carlo trial t; trial 0 is also the single-run seed.
inline Seed trial_seed(Seed base, std::uint64_t trial) noexcept {
  return derive_seed(stream_seed(base, Stream::Edges), trial);
}

}  // namespace gossip_loc
