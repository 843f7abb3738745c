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

#ifndef REPRO_METRICS_STORE_H_
#define REPRO_METRICS_STORE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repro/core_model.h"
#include "repro/journal.h"

namespace repro {

/// Metric values as submitted, before parsing.
struct MetricTexts {
  std::string_view accuracy;
  std::string_view precision;
  std::string_view recall;
  std::string_view f1;
};

/// Per-experiment state rebuilt from a metrics journal.
using ResultsByKey = std::map<std::string, ExperimentResults, std::less<>>;

/// Replays journal payloads (as returned by ScanJournal). Throws
/// CorruptJournalError for records that are unparsable or inconsistent.
ResultsByKey ReplayMetrics(std::span<std::string const> payloads);

/// Read-only load of a metrics journal; the file is never modified.
ResultsByKey LoadMetricsJournal(std::filesystem::path const& path);

/// Central store of experiment specs and per-run metrics.
///
/// Every mutation is appended to the journal (durably) before it becomes
/// visible, so replaying the journal reproduces the in-memory state.
class MetricsStore {
 public:
  explicit MetricsStore(std::filesystem::path journal_path);

  enum class RegisterOutcome { kCreated, kExisting, kConflict };
  enum class SubmitOutcome {
    kAccepted,
    kUnknownExperiment,
    kInvalidMetrics,
    kInvalidRun,
    kDuplicate,
  };

  /// Idempotent for an identical spec; a different spec under an existing
  /// key is a conflict and leaves the store unchanged.
  RegisterOutcome Register(ExperimentSpec const& spec);

  /// Accepts a run when every value parses to a real in [0,1], run_index is
  /// below planned_runs and the run has not been stored before. Journal
  /// lines keep the submitted text byte-for-byte.
  SubmitOutcome Submit(std::string_view experiment_key,
                       std::uint64_t run_index, MetricTexts const& values);

  std::optional<ExperimentSpec> SpecOf(std::string_view key) const;
  /// Throws Error(kUnknownExperiment).
  ExperimentResults Export(std::string_view key) const;
  std::vector<std::string> Keys() const;

 private:
  std::unique_ptr<Journal> journal_;
  mutable std::shared_mutex mu_;
  ResultsByKey results_;
};

}  // namespace repro

#endif  // REPRO_METRICS_STORE_H_
