// Copyright 2026 The rbcsp Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <array>

namespace rbcsp {

struct Seed {
  std::uint64_t value = 0;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent sub-seed from a seed and a path of indices, e.g.
/// (seed, constraint) or (seed, grid point, trial). Distinct paths give
/// unrelated streams, so work can be generated in any order.
inline Seed derive_seed(Seed seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(seed.value);
  for (std::uint64_t index : path) h = mix64(h ^ mix64(index + 0x632be59bd9b4e019ULL));
  return Seed{h};
}

/// xoshiro256** seeded through SplitMix64. One is created per constraint,
/// so construction must stay cheap.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(Seed seed) {
    std::uint64_t x = seed.value;
    for (auto& word : state_) {
      word = mix64(x);
      x += 0x9e3779b97f4a7c15ULL;
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

inline Stream make_stream(Seed seed) { return Stream(seed); }

}  // namespace rbcsp
