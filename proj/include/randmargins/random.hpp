// Copyright 2026 The RandMargins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RANDMARGINS_RANDOM_HPP_
#define RANDMARGINS_RANDOM_HPP_

#include <cstdint>
#include <random>

#include "randmargins/errors.hpp"

namespace randmargins {

// All randomness flows through a 64-bit Mersenne twister. The conversions
// below are written out by hand so streams are identical across standard
// library implementations.
using Rng = std::mt19937_64;
using RandomSeed = std::uint64_t;

// SplitMix64 finalizer.
constexpr std::uint64_t MixSeed(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed for work item `index` under `master`: MixSeed(master XOR index).
constexpr std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index) {
  return MixSeed(master ^ index);
}

// Uniform double in [0, 1) with 53 random bits.
inline double UniformDouble(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in the open interval (0, 1).
inline double UniformOpenDouble(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Uniform integer in [lo, hi] by rejection on the top bits.
inline std::int64_t UniformInt(Rng& rng, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw InvalidArgumentError("UniformInt: empty range");
  const std::uint64_t span =
      static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == UINT64_MAX) return static_cast<std::int64_t>(rng());
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range + 1) % range;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw > limit);
  return lo + static_cast<std::int64_t>(draw % range);
}

}  // namespace randmargins

#endif  // RANDMARGINS_RANDOM_HPP_
