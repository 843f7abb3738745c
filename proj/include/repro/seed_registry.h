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

#ifndef REPRO_SEED_REGISTRY_H_
#define REPRO_SEED_REGISTRY_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "repro/canonical_record.h"
#include "repro/journal.h"

namespace repro {

/// Seeds journaled for one experiment.
///
/// `seed_key` is the string the root seed was derived from. It equals the
/// experiment key unless several experiments deliberately share a seed (the
/// server keys by bug identifier so a buggy/corrected pair trains from the
/// same state).
struct SeedRecord {
  std::string experiment_key;
  std::string seed_key;
  std::uint64_t root_seed = 0;
  std::uint64_t generation = 0;
  /// Informational only; never compared.
  std::string created_at;

  friend bool operator==(SeedRecord const&, SeedRecord const&) = default;
};

Record ToRecord(SeedRecord const& record);
SeedRecord SeedRecordFromRecord(Record const& record);

/// First 8 bytes (big-endian) of SHA-256(master_key || 0x1F || key).
/// Throws Error(kInvalidKey) for an empty key.
std::uint64_t DeriveRootSeed(std::string_view master_key, std::string_view key);

enum class SeedPurpose { kSplit, kClientRng };

std::string_view ToString(SeedPurpose p);
std::optional<SeedPurpose> ParseSeedPurpose(std::string_view text);

/// First 8 bytes (big-endian) of
/// SHA-256(BE64(root_seed) || purpose || BE64(index)).
std::uint64_t DeriveSubseed(std::uint64_t root_seed, SeedPurpose purpose,
                            std::uint64_t index);
/// Throws Error(kInvalidPurpose) unless purpose is "split" or "client-rng".
std::uint64_t DeriveSubseed(SeedRecord const& record, std::string_view purpose,
                            std::uint64_t index);

/// Journaled store of per-experiment seeds.
///
/// Root seeds are derived, so the journal is a cache that can always be
/// rebuilt; it still records every record before it is handed out. Every
/// journaled root seed is re-derived on open, and a mismatch (for example a
/// changed master key) is reported as a corrupt journal.
class SeedRegistry {
 public:
  SeedRegistry(std::filesystem::path journal_path, std::string master_key);

  /// Returns the stored record, or derives, journals (durably) and returns
  /// a new one. `seed_key` defaults to `experiment_key`.
  SeedRecord GetOrCreate(std::string_view experiment_key,
                         std::string_view seed_key = {});

  /// Bumps and durably journals the generation counter; call before
  /// releasing sub-seeds derived at the new generation.
  SeedRecord MarkIssued(std::string_view experiment_key);

  std::optional<SeedRecord> Find(std::string_view experiment_key) const;
  std::size_t size() const;

 private:
  std::string master_key_;
  std::unique_ptr<Journal> journal_;
  mutable std::shared_mutex mu_;
  std::map<std::string, SeedRecord, std::less<>> records_;
};

}  // namespace repro

#endif  // REPRO_SEED_REGISTRY_H_
