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

#include "repro/split_engine.h"

#include <numeric>
#include <utility>

#include "repro/errors.h"

namespace repro {

double SplitMix64::NextUnit() {
  // 2^-64; the +1 keeps the result away from zero.
  constexpr double kScale = 1.0 / 18446744073709551616.0;
  return (static_cast<double>(Next()) + 1.0) * kScale;
}

std::vector<std::uint64_t> SeededPermutation(std::uint64_t n,
                                             std::uint64_t seed) {
  std::vector<std::uint64_t> p(n);
  std::iota(p.begin(), p.end(), std::uint64_t{0});
  SplitMix64 rng(seed);
  for (std::uint64_t j = n; j-- > 1;) {
    auto const i = rng.Next() % (j + 1);
    std::swap(p[i], p[j]);
  }
  return p;
}

Digest ChainChecksum(std::uint64_t seed,
                     std::span<std::uint64_t const> indices) {
  auto const seed_be = EncodeBE64(seed);
  Digest d = Sha256Of(std::span<std::uint8_t const>(seed_be));
  for (auto index : indices) {
    d = Sha256().Update(std::span<std::uint8_t const>(d)).UpdateBE64(index).Finish();
  }
  return d;
}

SplitAssignment MakeSplit(ChallengeManifest const& manifest,
                          std::uint64_t split_seed, std::uint64_t run_index) {
  auto const n = manifest.item_count();
  if (n < 2) {
    throw Error(ErrorCode::kChallengeTooSmall,
                "challenge '" + manifest.challenge_id + "' has " +
                    std::to_string(n) + " items");
  }
  auto const train_count = manifest.train_count();
  auto p = SeededPermutation(n, split_seed);

  SplitAssignment s;
  s.run_index = run_index;
  s.split_seed = split_seed;
  s.train_indices.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(train_count));
  s.test_indices.assign(p.begin() + static_cast<std::ptrdiff_t>(train_count), p.end());
  s.train_checksum = ChainChecksum(split_seed, s.train_indices);
  s.test_checksum = ChainChecksum(split_seed, s.test_indices);
  return s;
}

}  // namespace repro
