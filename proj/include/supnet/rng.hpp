#pragma once

#include <cstdint>
#include <random>

namespace supnet {

/// Deterministic engine for a (seed, stream) pair. Distinct streams let one
/// user seed feed several draws (train/val/test, pair sampling, frequency
/// sampling) without the sequences overlapping.
inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Derived seed for an independent sub-task (e.g. one coordinate fit).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return seed ^ (0x9E3779B97F4A7C15ull * (salt + 1));
}

}  // namespace supnet
