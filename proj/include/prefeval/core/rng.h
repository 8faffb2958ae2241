// Copyright 2026 The Prefeval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PREFEVAL_CORE_RNG_H_
#define PREFEVAL_CORE_RNG_H_

#include <cstdint>
#include <random>

namespace prefeval {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
inline std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the `counter`-th draw of `stream` under `base`. Parallel loops
// derive one seed per iteration from this so that results do not depend on
// execution order.
inline std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream,
                                std::uint64_t counter = 0) {
  return MixBits(MixBits(MixBits(base) ^ stream) ^ counter);
}

// Uniform index in [0, n).
inline std::size_t UniformIndex(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double UniformUnit(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace prefeval

#endif  // PREFEVAL_CORE_RNG_H_
