#pragma once

#include <cstdint>
#include <random>

namespace optdes::rng {

// Generator contract used everywhere a seed appears in this library:
// a std::mt19937_64 seeded directly with the 64-bit seed, with floating
// draws produced by the 53-bit mappings below. Recorded in output
// metadata so results can be reproduced.
inline constexpr const char* kRngVersion = "optdes-rng-v1";
inline constexpr const char* kSeedDerivationVersion = "optdes-seed-v1";

using Engine = std::mt19937_64;

// Strictly inside (0,1): ((x >> 11) + 0.5) * 2^-53.
inline double uniform01(Engine& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

// Strictly inside (-1,1).
inline double uniform_pm1(Engine& eng) { return 2.0 * uniform01(eng) - 1.0; }

// SplitMix64 finalizer; full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ mix64(v));
}

// Stable per-run seed stream: hash of (master seed, scenario, algorithm,
// run index). Independent of execution order, so runs can be dispatched
// to any worker in any order and still reproduce.
inline std::uint64_t derive_run_seed(std::uint64_t master_seed, int k, int n,
                                     int criterion_id, int algorithm_id,
                                     std::uint64_t run_index) {
  std::uint64_t h = mix64(master_seed);
  h = hash_combine(h, static_cast<std::uint64_t>(k));
  h = hash_combine(h, static_cast<std::uint64_t>(n));
  h = hash_combine(h, static_cast<std::uint64_t>(criterion_id));
  h = hash_combine(h, static_cast<std::uint64_t>(algorithm_id));
  h = hash_combine(h, run_index);
  return h;
}

}  // namespace optdes::rng
