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

#ifndef REPRO_CORE_MODEL_H_
#define REPRO_CORE_MODEL_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repro/canonical_record.h"
#include "repro/hashing.h"

namespace repro {

enum class EvaluationType { kBuggy, kCorrected };

std::string_view ToString(EvaluationType t);
std::optional<EvaluationType> ParseEvaluationType(std::string_view text);

/// Identity and attributes of one experiment. A buggy and a corrected
/// experiment of the same bug must agree on everything except
/// `evaluation_type` and `artifact`.
struct ExperimentSpec {
  std::string bug_identifier;
  EvaluationType evaluation_type = EvaluationType::kBuggy;
  std::string model;
  std::string challenge;
  /// Root random state. Assigned by the server at registration.
  std::uint64_t state = 0;
  std::string artifact;
  std::string software;
  std::uint32_t epochs = 1;
  std::uint32_t planned_runs = 1;

  /// "bug_identifier/evaluation_type", e.g. "study-pr31433/buggy".
  std::string Key() const;

  friend bool operator==(ExperimentSpec const&,
                         ExperimentSpec const&) = default;
};

/// Throws Error(kInvalidArgument) when an invariant is violated.
void Validate(ExperimentSpec const& spec);
Record ToRecord(ExperimentSpec const& spec);
ExperimentSpec SpecFromRecord(Record const& record);

/// Result of checking that two experiments form a comparable pair.
struct PairValidation {
  std::vector<std::string> mismatches;

  bool ok() const { return mismatches.empty(); }
};

PairValidation ValidateExperimentPair(ExperimentSpec const& buggy,
                                      ExperimentSpec const& corrected);

/// Exact rational in (0, 1), written "num/den".
struct TrainFraction {
  std::uint64_t numerator = 1;
  std::uint64_t denominator = 2;

  std::string ToString() const;
  static std::optional<TrainFraction> Parse(std::string_view text);
  /// ceil(numerator * n / denominator), computed exactly.
  std::uint64_t CeilTimes(std::uint64_t n) const;

  friend bool operator==(TrainFraction const&, TrainFraction const&) = default;
};

/// A dataset ("challenge"): its canonical item order and per-item digests.
struct ChallengeManifest {
  std::string challenge_id;
  std::vector<Digest> item_digests;
  TrainFraction train_fraction;

  std::uint64_t item_count() const { return item_digests.size(); }
  std::uint64_t train_count() const;
  /// SHA-256 over the manifest's canonical record bytes.
  Digest ContentDigest() const;

  friend bool operator==(ChallengeManifest const&,
                         ChallengeManifest const&) = default;
};

/// Throws Error(kInvalidManifest).
void Validate(ChallengeManifest const& manifest);
Record ToRecord(ChallengeManifest const& manifest);
/// Validates as well as parses.
ChallengeManifest ManifestFromRecord(Record const& record);
ChallengeManifest LoadManifest(std::filesystem::path const& path);

enum class Metric { kAccuracy, kPrecision, kRecall, kF1 };
inline constexpr std::array<Metric, 4> kAllMetrics = {
    Metric::kAccuracy, Metric::kPrecision, Metric::kRecall, Metric::kF1};
std::string_view ToString(Metric m);

struct RunMetrics {
  std::uint64_t run_index = 0;
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;

  double Get(Metric m) const;

  friend bool operator==(RunMetrics const&, RunMetrics const&) = default;
};

bool InUnitInterval(double v);
void Validate(RunMetrics const& run);
Record ToRecord(RunMetrics const& run);
RunMetrics RunFromRecord(Record const& record);

/// One experiment's collected runs, ordered by run_index.
struct ExperimentResults {
  ExperimentSpec spec;
  std::vector<RunMetrics> runs;

  std::size_t completed_runs() const { return runs.size(); }
  /// Fewer runs than planned; such results are dagger-marked in reports.
  bool shortfall() const { return runs.size() < spec.planned_runs; }

  friend bool operator==(ExperimentResults const&,
                         ExperimentResults const&) = default;
};

Record ToRecord(ExperimentResults const& results);
ExperimentResults ResultsFromRecord(Record const& record);

}  // namespace repro

#endif  // REPRO_CORE_MODEL_H_
