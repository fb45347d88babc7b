#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace occkit::rng {

using Engine = std::mt19937_64;

// SplitMix64 finalizer; used to derive substream seeds deterministically.
std::uint64_t splitmix64(std::uint64_t x);

// Combines a seed with a stream label into a new seed.
std::uint64_t mix(std::uint64_t seed, std::uint64_t label);

// FNV-1a over a string, for labelling streams by dataset/class names.
std::uint64_t fnv1a(std::string_view s);

// Uniform double in [0, 1) with 53 random bits. Defined in terms of raw
// engine output so results do not depend on the standard library's
// distribution implementations.
double uniform01(Engine& eng);

// Uniform double in [lo, hi).
double uniform(Engine& eng, double lo, double hi);

// Uniform integer in [0, bound) via rejection sampling (no modulo bias).
std::size_t uniform_index(Engine& eng, std::size_t bound);

// Standard normal deviate (Box-Muller, no state carried between calls).
double normal(Engine& eng);

// In-place Fisher-Yates shuffle.
void shuffle(std::span<std::size_t> ids, Engine& eng);

// k distinct indices drawn from [0, n) without replacement.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    Engine& eng);

}  // namespace occkit::rng
