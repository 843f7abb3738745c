// Copyright 2026 The repro-bench Authors
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

#ifndef REPRO_SPLIT_ENGINE_H_
#define REPRO_SPLIT_ENGINE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "repro/core_model.h"
#include "repro/hashing.h"

namespace repro {

struct SplitMix64Step {
  std::uint64_t state;
  std::uint64_t output;

  friend bool operator==(SplitMix64Step const&, SplitMix64Step const&) = default;
};

/// One step of the SplitMix64 generator as a pure function.
constexpr SplitMix64Step SplitMix64Next(std::uint64_t state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return {state, z ^ (z >> 31)};
}

/// Stateful wrapper over SplitMix64Next.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t Next() {
    auto step = SplitMix64Next(state_);
    state_ = step.state;
    return step.output;
  }

  /// (output + 1) / 2^64, a uniform in (0, 1].
  double NextUnit();

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Fisher-Yates over [0, n): for j = n-1 down to 1, i = next() mod (j+1),
/// swap(p[i], p[j]).
std::vector<std::uint64_t> SeededPermutation(std::uint64_t n,
                                             std::uint64_t seed);

/// d0 = SHA-256(BE64(seed)); d_k = SHA-256(d_{k-1} || BE64(index_k)).
Digest ChainChecksum(std::uint64_t seed,
                     std::span<std::uint64_t const> indices);

struct SplitAssignment {
  std::uint64_t run_index = 0;
  std::uint64_t split_seed = 0;
  std::vector<std::uint64_t> train_indices;
  std::vector<std::uint64_t> test_indices;
  Digest train_checksum{};
  Digest test_checksum{};

  friend bool operator==(SplitAssignment const&,
                         SplitAssignment const&) = default;
};

/// Deterministic train/test split of a challenge. The first
/// ceil(train_fraction * n) entries of the seeded permutation form the
/// training subset, the rest the test subset, both in permuted order.
/// `run_index` is carried for audit only and does not affect the indices.
/// Throws Error(kChallengeTooSmall) for fewer than two items.
SplitAssignment MakeSplit(ChallengeManifest const& manifest,
                          std::uint64_t split_seed, std::uint64_t run_index);

}  // namespace repro

#endif  // REPRO_SPLIT_ENGINE_H_
