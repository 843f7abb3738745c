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

#include "repro/metrics_store.h"

#include <algorithm>
#include <mutex>

#include "repro/errors.h"

namespace repro {

namespace {

constexpr char kKindExperiment[] = "experiment";
constexpr char kKindRun[] = "run";

std::optional<double> ParseMetric(std::string_view text) {
  auto v = ParseReal(text);
  if (!v || !InUnitInterval(*v)) return std::nullopt;
  return v;
}

bool HasRun(ExperimentResults const& r, std::uint64_t run_index) {
  return std::ranges::binary_search(r.runs, run_index, {},
                                    &RunMetrics::run_index);
}

void InsertRun(ExperimentResults& r, RunMetrics const& run) {
  auto it = std::ranges::lower_bound(r.runs, run.run_index, {},
                                     &RunMetrics::run_index);
  r.runs.insert(it, run);
}

Record RunLine(std::string_view key, std::uint64_t run_index,
               MetricTexts const& v) {
  return Record{{"accuracy", v.accuracy},       {"experiment_key", key},
                {"f1", v.f1},                   {"kind", kKindRun},
                {"precision", v.precision},     {"recall", v.recall},
                {"run_index", run_index}};
}

}  // namespace

ResultsByKey ReplayMetrics(std::span<std::string const> payloads) {
  ResultsByKey out;
  std::size_t line = 0;
  for (auto const& payload : payloads) {
    ++line;
    try {
      auto const r = DecodeRecord(payload);
      auto const& kind = RequireString(r, "kind");
      if (kind == kKindExperiment) {
        auto spec = SpecFromRecord(RequireObject(r, "spec"));
        auto key = spec.Key();
        if (out.contains(key)) {
          throw CorruptJournalError(line, "experiment registered twice");
        }
        out.emplace(std::move(key), ExperimentResults{std::move(spec), {}});
      } else if (kind == kKindRun) {
        auto const& key = RequireString(r, "experiment_key");
        auto it = out.find(key);
        if (it == out.end()) {
          throw CorruptJournalError(line, "run for unregistered experiment");
        }
        auto run = RunFromRecord(r);
        if (run.run_index >= it->second.spec.planned_runs ||
            HasRun(it->second, run.run_index)) {
          throw CorruptJournalError(line, "invalid or duplicate run_index");
        }
        InsertRun(it->second, run);
      } else {
        throw CorruptJournalError(line, "unknown record kind '" + kind + "'");
      }
    } catch (CorruptJournalError const&) {
      throw;
    } catch (Error const& e) {
      throw CorruptJournalError(line, e.what());
    }
  }
  return out;
}

ResultsByKey LoadMetricsJournal(std::filesystem::path const& path) {
  auto const scan = ScanJournal(path);
  return ReplayMetrics(scan.payloads);
}

MetricsStore::MetricsStore(std::filesystem::path journal_path)
    : journal_(std::make_unique<Journal>(std::move(journal_path))) {
  results_ = ReplayMetrics(journal_->loaded());
}

MetricsStore::RegisterOutcome MetricsStore::Register(
    ExperimentSpec const& spec) {
  Validate(spec);
  auto key = spec.Key();
  std::unique_lock<std::shared_mutex> lk(mu_);
  if (auto it = results_.find(key); it != results_.end()) {
    return it->second.spec == spec ? RegisterOutcome::kExisting
                                   : RegisterOutcome::kConflict;
  }
  journal_->Append(EncodeRecord(
      Record{{"kind", kKindExperiment}, {"spec", ToRecord(spec)}}));
  results_.emplace(std::move(key), ExperimentResults{spec, {}});
  return RegisterOutcome::kCreated;
}

MetricsStore::SubmitOutcome MetricsStore::Submit(
    std::string_view experiment_key, std::uint64_t run_index,
    MetricTexts const& values) {
  RunMetrics run;
  run.run_index = run_index;
  auto a = ParseMetric(values.accuracy);
  auto p = ParseMetric(values.precision);
  auto r = ParseMetric(values.recall);
  auto f = ParseMetric(values.f1);

  std::unique_lock<std::shared_mutex> lk(mu_);
  auto it = results_.find(experiment_key);
  if (it == results_.end()) return SubmitOutcome::kUnknownExperiment;
  if (!a || !p || !r || !f) return SubmitOutcome::kInvalidMetrics;
  if (run_index >= it->second.spec.planned_runs) {
    return SubmitOutcome::kInvalidRun;
  }
  if (HasRun(it->second, run_index)) return SubmitOutcome::kDuplicate;

  journal_->Append(EncodeRecord(RunLine(experiment_key, run_index, values)));
  run.accuracy = *a;
  run.precision = *p;
  run.recall = *r;
  run.f1 = *f;
  InsertRun(it->second, run);
  return SubmitOutcome::kAccepted;
}

std::optional<ExperimentSpec> MetricsStore::SpecOf(std::string_view key) const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  auto it = results_.find(key);
  if (it == results_.end()) return std::nullopt;
  return it->second.spec;
}

ExperimentResults MetricsStore::Export(std::string_view key) const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  auto it = results_.find(key);
  if (it == results_.end()) {
    throw Error(ErrorCode::kUnknownExperiment, std::string(key));
  }
  return it->second;
}

std::vector<std::string> MetricsStore::Keys() const {
  std::shared_lock<std::shared_mutex> lk(mu_);
  std::vector<std::string> keys;
  keys.reserve(results_.size());
  for (auto const& [k, v] : results_) keys.push_back(k);
  return keys;
}

}  // namespace repro
