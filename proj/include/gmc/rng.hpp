//
// Project gmcmpnn - Copyright 2026 gmcmpnn contributors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gmc::rng {

// All randomness in the project flows through these helpers on top of
// std::mt19937_64, whose output sequence is fixed by the standard. The
// distribution code is hand-rolled because std::uniform_*_distribution is
// implementation-defined and would break the per-seed determinism contract
// across toolchains.

using Engine = std::mt19937_64;

// Uniform double in [0, 1) with 53 bits of precision.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

// Uniform integer in [0, n). Modulo bias is ~n/2^64, irrelevant next to the
// determinism requirement.
inline std::uint64_t below(Engine& eng, std::uint64_t n) {
  return eng() % n;
}

// Fisher-Yates, deterministic per engine state.
template <class T>
void shuffle(std::vector<T>& v, Engine& eng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(below(eng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// SplitMix64 step, used to derive independent seed streams from one seed.
inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
  return mix(seed ^ mix(stream));
}

}  // namespace gmc::rng
