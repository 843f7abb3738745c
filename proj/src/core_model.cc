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

#include "repro/core_model.h"

#include <limits>

#include "repro/errors.h"

namespace repro {

namespace {

std::uint32_t RequirePositiveU32(Record const& r, std::string_view key) {
  auto v = RequireUnsigned(r, key);
  if (v == 0 || v > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kInvalidRecord,
                "field '" + std::string(key) + "' must be a positive integer");
  }
  return static_cast<std::uint32_t>(v);
}

double RequireMetric(Record const& r, std::string_view key) {
  auto v = ParseReal(RequireString(r, key));
  if (!v || !InUnitInterval(*v)) {
    throw Error(ErrorCode::kInvalidRecord,
                "field '" + std::string(key) + "' must be a real in [0,1]");
  }
  return *v;
}

}  // namespace

std::string_view ToString(EvaluationType t) {
  return t == EvaluationType::kBuggy ? "buggy" : "corrected";
}

std::optional<EvaluationType> ParseEvaluationType(std::string_view text) {
  if (text == "buggy") return EvaluationType::kBuggy;
  if (text == "corrected") return EvaluationType::kCorrected;
  return std::nullopt;
}

std::string ExperimentSpec::Key() const {
  return bug_identifier + "/" + std::string(ToString(evaluation_type));
}

void Validate(ExperimentSpec const& spec) {
  if (spec.bug_identifier.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bug_identifier is empty");
  }
  if (spec.bug_identifier.find('/') != std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "bug_identifier contains '/'");
  }
  if (spec.epochs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 1");
  }
  if (spec.planned_runs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "planned_runs must be >= 1");
  }
}

Record ToRecord(ExperimentSpec const& spec) {
  return Record{
      {"artifact", spec.artifact},
      {"bug_identifier", spec.bug_identifier},
      {"challenge", spec.challenge},
      {"epochs", spec.epochs},
      {"evaluation_type", std::string(ToString(spec.evaluation_type))},
      {"model", spec.model},
      {"planned_runs", spec.planned_runs},
      {"software", spec.software},
      {"state", FormatU64(spec.state)},
  };
}

ExperimentSpec SpecFromRecord(Record const& record) {
  ExperimentSpec spec;
  spec.artifact = RequireString(record, "artifact");
  spec.bug_identifier = RequireString(record, "bug_identifier");
  spec.challenge = RequireString(record, "challenge");
  spec.epochs = RequirePositiveU32(record, "epochs");
  auto type = ParseEvaluationType(RequireString(record, "evaluation_type"));
  if (!type) {
    throw Error(ErrorCode::kInvalidRecord,
                "evaluation_type must be 'buggy' or 'corrected'");
  }
  spec.evaluation_type = *type;
  spec.model = RequireString(record, "model");
  spec.planned_runs = RequirePositiveU32(record, "planned_runs");
  spec.software = RequireString(record, "software");
  spec.state = RequireDecimalU64(record, "state");
  try {
    Validate(spec);
  } catch (Error const& e) {
    throw Error(ErrorCode::kInvalidRecord, e.what());
  }
  return spec;
}

PairValidation ValidateExperimentPair(ExperimentSpec const& buggy,
                                      ExperimentSpec const& corrected) {
  PairValidation v;
  if (buggy.evaluation_type == corrected.evaluation_type) {
    v.mismatches.emplace_back("evaluation_type must differ");
  }
  // Fixed attribute order keeps the result symmetric in its arguments.
  if (buggy.bug_identifier != corrected.bug_identifier) {
    v.mismatches.emplace_back("bug_identifier");
  }
  if (buggy.model != corrected.model) v.mismatches.emplace_back("model");
  if (buggy.challenge != corrected.challenge) {
    v.mismatches.emplace_back("challenge");
  }
  if (buggy.state != corrected.state) v.mismatches.emplace_back("state");
  if (buggy.software != corrected.software) {
    v.mismatches.emplace_back("software");
  }
  if (buggy.epochs != corrected.epochs) v.mismatches.emplace_back("epochs");
  return v;
}

std::string TrainFraction::ToString() const {
  return FormatU64(numerator) + "/" + FormatU64(denominator);
}

std::optional<TrainFraction> TrainFraction::Parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto num = ParseU64(text.substr(0, slash));
  auto den = ParseU64(text.substr(slash + 1));
  if (!num || !den || *num == 0 || *num >= *den) return std::nullopt;
  return TrainFraction{*num, *den};
}

std::uint64_t TrainFraction::CeilTimes(std::uint64_t n) const {
  auto const product = static_cast<unsigned __int128>(numerator) * n;
  return static_cast<std::uint64_t>((product + denominator - 1) / denominator);
}

std::uint64_t ChallengeManifest::train_count() const {
  return train_fraction.CeilTimes(item_count());
}

Digest ChallengeManifest::ContentDigest() const {
  return Sha256Of(EncodeRecord(ToRecord(*this)));
}

void Validate(ChallengeManifest const& manifest) {
  if (manifest.challenge_id.empty()) {
    throw Error(ErrorCode::kInvalidManifest, "challenge_id is empty");
  }
  auto const& f = manifest.train_fraction;
  if (f.numerator == 0 || f.numerator >= f.denominator) {
    throw Error(ErrorCode::kInvalidManifest,
                "train_fraction must lie strictly between 0 and 1");
  }
  auto const n = manifest.item_count();
  if (n >= 2) {
    auto const train = manifest.train_count();
    if (train < 1 || n - train < 1) {
      throw Error(ErrorCode::kInvalidManifest,
                  "train_fraction " + f.ToString() + " leaves an empty subset "
                  "for " + std::to_string(n) + " items");
    }
  }
}

Record ToRecord(ChallengeManifest const& manifest) {
  Record digests = Record::array();
  for (auto const& d : manifest.item_digests) digests.push_back(ToHex(d));
  return Record{
      {"challenge_id", manifest.challenge_id},
      {"item_count", manifest.item_count()},
      {"item_digests", std::move(digests)},
      {"train_fraction", manifest.train_fraction.ToString()},
  };
}

ChallengeManifest ManifestFromRecord(Record const& record) {
  ChallengeManifest m;
  try {
    m.challenge_id = RequireString(record, "challenge_id");
    auto const count = RequireUnsigned(record, "item_count");
    for (auto const& item : RequireArray(record, "item_digests")) {
      auto d = item.is_string() ? DigestFromHex(item.get<std::string>())
                                : std::nullopt;
      if (!d) {
        throw Error(ErrorCode::kInvalidManifest,
                    "item_digests must hold 64-char lowercase hex strings");
      }
      m.item_digests.push_back(*d);
    }
    if (count != m.item_digests.size()) {
      throw Error(ErrorCode::kInvalidManifest,
                  "item_count does not match item_digests");
    }
    auto f = TrainFraction::Parse(RequireString(record, "train_fraction"));
    if (!f) {
      throw Error(ErrorCode::kInvalidManifest,
                  "train_fraction must be 'num/den' with 0 < num < den");
    }
    m.train_fraction = *f;
  } catch (Error const& e) {
    if (e.code() == ErrorCode::kInvalidManifest) throw;
    throw Error(ErrorCode::kInvalidManifest, e.what());
  }
  Validate(m);
  return m;
}

ChallengeManifest LoadManifest(std::filesystem::path const& path) {
  auto records = ReadRecordsFile(path);
  if (records.size() != 1) {
    throw Error(ErrorCode::kInvalidManifest,
                path.string() + ": expected exactly one record");
  }
  return ManifestFromRecord(records.front());
}

std::string_view ToString(Metric m) {
  switch (m) {
    case Metric::kAccuracy:
      return "accuracy";
    case Metric::kPrecision:
      return "precision";
    case Metric::kRecall:
      return "recall";
    case Metric::kF1:
      return "f1";
  }
  return "?";
}

double RunMetrics::Get(Metric m) const {
  switch (m) {
    case Metric::kAccuracy:
      return accuracy;
    case Metric::kPrecision:
      return precision;
    case Metric::kRecall:
      return recall;
    case Metric::kF1:
      return f1;
  }
  return 0;
}

bool InUnitInterval(double v) { return v >= 0.0 && v <= 1.0; }

void Validate(RunMetrics const& run) {
  for (auto m : kAllMetrics) {
    if (!InUnitInterval(run.Get(m))) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(ToString(m)) + " outside [0,1]");
    }
  }
}

Record ToRecord(RunMetrics const& run) {
  return Record{
      {"accuracy", FormatReal(run.accuracy)},
      {"f1", FormatReal(run.f1)},
      {"precision", FormatReal(run.precision)},
      {"recall", FormatReal(run.recall)},
      {"run_index", run.run_index},
  };
}

RunMetrics RunFromRecord(Record const& record) {
  RunMetrics run;
  run.accuracy = RequireMetric(record, "accuracy");
  run.f1 = RequireMetric(record, "f1");
  run.precision = RequireMetric(record, "precision");
  run.recall = RequireMetric(record, "recall");
  run.run_index = RequireUnsigned(record, "run_index");
  return run;
}

Record ToRecord(ExperimentResults const& results) {
  Record runs = Record::array();
  for (auto const& r : results.runs) runs.push_back(ToRecord(r));
  return Record{
      {"completed_runs", results.completed_runs()},
      {"runs", std::move(runs)},
      {"spec", ToRecord(results.spec)},
  };
}

ExperimentResults ResultsFromRecord(Record const& record) {
  ExperimentResults results;
  results.spec = SpecFromRecord(RequireObject(record, "spec"));
  for (auto const& r : RequireArray(record, "runs")) {
    auto run = RunFromRecord(r);
    if (!results.runs.empty() && results.runs.back().run_index >= run.run_index) {
      throw Error(ErrorCode::kInvalidRecord,
                  "runs must be strictly ordered by run_index");
    }
    results.runs.push_back(run);
  }
  if (RequireUnsigned(record, "completed_runs") != results.runs.size()) {
    throw Error(ErrorCode::kInvalidRecord,
                "completed_runs does not match the run list");
  }
  return results;
}

}  // namespace repro
