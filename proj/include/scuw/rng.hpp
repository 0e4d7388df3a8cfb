#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace scuw {

/// SplitMix64 step; used to turn (seed, stream ids) into independent engine
/// seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic sub-stream seed for (seed, ids...). Different id tuples give
/// statistically independent streams, so trials can run in any order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t state = seed;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t id : ids) {
    state ^= out + id * 0xD1B54A32D192ED03ull;
    out = splitmix64(state);
  }
  return out;
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::initializer_list<std::uint64_t> ids = {}) {
  return Engine(derive_seed(seed, ids));
}

}  // namespace scuw
