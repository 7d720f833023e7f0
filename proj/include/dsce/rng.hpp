#pragma once

#include <cstdint>
#include <random>

namespace dsce {

using Rng = std::mt19937_64;

// splitmix64 finalizer; full-avalanche 64-bit mix.
std::uint64_t mix64(std::uint64_t x);

// Key for an independent per-trial stream. Trials seeded this way can run in
// any order (or in parallel) and still produce identical results.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point_index,
                          std::uint64_t trial_index);

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

}  // namespace dsce
