#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace stackelberg {

/// Engine used everywhere randomness enters; always seeded explicitly.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives a child seed from a base seed and a sequence of integer keys
/// (cell index, trial index, arm index, ...). Order-sensitive.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys) noexcept;

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

}  // namespace stackelberg
