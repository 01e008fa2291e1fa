#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace globalwalk {

using Rng = std::mt19937_64;

/// Stream identifiers mixed into derived seeds so that each consumer of
/// randomness owns an independent, reproducible stream.
enum class Stream : std::uint64_t {
  Init = 1,
  WalkOrder = 2,
  Walk = 3,
  Train = 4,
  KMeans = 5,
  Split = 6,
  Noise = 7,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed from a base seed and a sequence of integer keys.
/// Order of keys matters; identical inputs always give identical output.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream,
                                 std::initializer_list<std::uint64_t> keys = {}) {
  std::uint64_t s = derive_seed(base, {static_cast<std::uint64_t>(stream)});
  return keys.size() == 0 ? s : derive_seed(s, keys);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace globalwalk
