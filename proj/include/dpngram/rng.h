//
// Copyright 2026 The dpngram Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPNGRAM_RNG_H_
#define DPNGRAM_RNG_H_

#include <cstdint>
#include <random>

namespace dpngram {

// All stochastic components draw from a 64-bit Mersenne Twister; streams for
// independent sub-tasks (users, levels, shards) are derived with MixSeed so
// results do not depend on scheduling.
using Rng = std::mt19937_64;

// SplitMix64 finalizer applied to a combination of two words.
constexpr std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng MakeRng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(MixSeed(seed, stream));
}

// Uniform double in (0, 1], never zero; safe as an argument to log().
inline double UniformOpenClosed(Rng& rng) {
  return 1.0 - std::generate_canonical<double, 64>(rng);
}

}  // namespace dpngram

#endif  // DPNGRAM_RNG_H_
