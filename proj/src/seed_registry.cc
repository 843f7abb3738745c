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

#include "repro/seed_registry.h"

#include <chrono>
#include <ctime>
#include <mutex>

#include "repro/errors.h"
#include "repro/hashing.h"

namespace repro {

namespace {

std::string UtcNow() {
  auto const now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

Record ToRecord(SeedRecord const& record) {
  return Record{
      {"created_at", record.created_at},
      {"experiment_key", record.experiment_key},
      {"generation", record.generation},
      {"root_seed", FormatU64(record.root_seed)},
      {"seed_key", record.seed_key},
  };
}

SeedRecord SeedRecordFromRecord(Record const& record) {
  SeedRecord r;
  r.created_at = RequireString(record, "created_at");
  r.experiment_key = RequireString(record, "experiment_key");
  r.generation = RequireUnsigned(record, "generation");
  r.root_seed = RequireDecimalU64(record, "root_seed");
  r.seed_key = RequireString(record, "seed_key");
  return r;
}

std::uint64_t DeriveRootSeed(std::string_view master_key,
                             std::string_view key) {
  if (key.empty()) {
    throw Error(ErrorCode::kInvalidKey, "experiment key is empty");
  }
  return LeadingU64(
      Sha256().Update(master_key).Update("\x1f").Update(key).Finish());
}

std::string_view ToString(SeedPurpose p) {
  return p == SeedPurpose::kSplit ? "split" : "client-rng";
}

std::optional<SeedPurpose> ParseSeedPurpose(std::string_view text) {
  if (text == "split") return SeedPurpose::kSplit;
  if (text == "client-rng") return SeedPurpose::kClientRng;
  return std::nullopt;
}

std::uint64_t DeriveSubseed(std::uint64_t root_seed, SeedPurpose purpose,
                            std::uint64_t index) {
  return LeadingU64(Sha256()
                        .UpdateBE64(root_seed)
                        .Update(ToString(purpose))
                        .UpdateBE64(index)
                        .Finish());
}

std::uint64_t DeriveSubseed(SeedRecord const& record, std::string_view purpose,
                            std::uint64_t index) {
  auto p = ParseSeedPurpose(purpose);
  if (!p) {
    throw Error(ErrorCode::kInvalidPurpose,
                "unknown seed purpose '" + std::string(purpose) + "'");
  }
  return DeriveSubseed(record.root_seed, *p, index);
}

SeedRegistry::SeedRegistry(std::filesystem::path journal_path,
                           std::string master_key)
    : master_key_(std::move(master_key)),
      journal_(std::make_unique<Journal>(std::move(journal_path))) {
  std::size_t line = 0;
  for (auto const& payload : journal_->loaded()) {
    ++line;
    SeedRecord r;
    try {
      r = SeedRecordFromRecord(DecodeRecord(payload));
    } catch (Error const& e) {
      throw CorruptJournalError(line, e.what());
    }
    if (r.experiment_key.empty() || r.seed_key.empty()) {
      throw CorruptJournalError(line, "empty key");
    }
    if (r.root_seed != DeriveRootSeed(master_key_, r.seed_key)) {
      throw CorruptJournalError(
          line, "root_seed does not match its derivation (master key changed?)");
    }
    auto it = records_.find(r.experiment_key);
    if (it != records_.end()) {
      if (it->second.seed_key != r.seed_key ||
          r.generation < it->second.generation) {
        throw CorruptJournalError(line, "record regresses an earlier entry");
      }
      r.created_at = it->second.created_at;
      it->second = std::move(r);
    } else {
      records_.emplace(r.experiment_key, std::move(r));
    }
  }
}

SeedRecord SeedRegistry::GetOrCreate(std::string_view experiment_key,
                                     std::string_view seed_key) {
  if (experiment_key.empty()) {
    throw Error(ErrorCode::kInvalidKey, "experiment key is empty");
  }
  if (seed_key.empty()) seed_key = experiment_key;
  std::unique_lock<std::shared_mutex> lk(mu_);
  if (auto it = records_.find(experiment_key); it != records_.end()) {
    if (it->second.seed_key != seed_key) {
      throw Error(ErrorCode::kInvalidKey,
                  "experiment '" + std::string(experiment_key) +
                      "' is bound to seed key '" + it->second.seed_key + "'");
    }
    return it->second;
  }
  SeedRecord r;
  r.experiment_key = std::string(experiment_key);
  r.seed_key = std::string(seed_key);
  r.root_seed = DeriveRootSeed(master_key_, seed_key);
  r.generation = 0;
  r.created_at = UtcNow();
  journal_->Append(EncodeRecord(ToRecord(r)));
  records_.emplace(r.experiment_key, r);
  return r;
}

SeedRecord SeedRegistry::MarkIssued(std::string_view experiment_key) {
  std::unique_lock<std::shared_mutex> lk(mu_);
  auto it = records_.find(experiment_key);
  if (it == records_.end()) {
    throw Error(ErrorCode::kUnknownExperiment, std::string(experiment_key));
  }
  auto next = it->second;
  ++next.generation;
  journal_->Append(EncodeRecord(ToRecord(next)));
  it->second = next;
  return next;
}

std::optional<SeedRecord> SeedRegistry::Find(
    std::string_view experiment_key) const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  auto it = records_.find(experiment_key);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::size_t SeedRegistry::size() const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  return records_.size();
}

}  // namespace repro
