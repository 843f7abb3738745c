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

#ifndef REPRO_STUDY_H_
#define REPRO_STUDY_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repro/canonical_record.h"
#include "repro/core_model.h"

namespace repro {

enum class RejectionCode {
  kCompileError,
  kRuntimeCrash,
  kUserCode,
  kCpuOnly,
  kNoAffectedApp,
};
enum class FavourTag { kGradients, kMathFunctions };
enum class BugStage { kCollected, kFiltered, kBuilt, kEvaluated };

std::string_view ToString(RejectionCode c);
std::string_view ToString(FavourTag t);
std::string_view ToString(BugStage s);
std::optional<RejectionCode> ParseRejectionCode(std::string_view text);
std::optional<FavourTag> ParseFavourTag(std::string_view text);
std::optional<BugStage> ParseBugStage(std::string_view text);

/// One framework bug: the last revision containing it and the revision
/// that fixes it.
struct BugRecord {
  std::string bug_id;
  std::uint64_t pr_number = 0;
  std::string buggy_revision;
  std::string corrected_revision;
  /// In the order the reviewers listed them; no duplicates.
  std::vector<RejectionCode> rejection_codes;
  std::vector<FavourTag> favour_tags;
  BugStage stage = BugStage::kCollected;

  bool rejected() const { return !rejection_codes.empty(); }

  friend bool operator==(BugRecord const&, BugRecord const&) = default;
};

/// Throws Error(kInvalidRecord): empty id or revisions, identical revisions,
/// duplicate codes or tags, or a rejected record past the collected stage.
void Validate(BugRecord const& bug);
Record ToRecord(BugRecord const& bug);
BugRecord BugFromRecord(Record const& record);
std::vector<BugRecord> LoadCorpus(std::filesystem::path const& path);

struct FilterOutcome {
  /// Favour-tagged records first; input order otherwise preserved.
  std::vector<BugRecord> accepted;
  /// Keyed by each record's first listed rejection code.
  std::map<RejectionCode, std::vector<BugRecord>> rejected;
};

FilterOutcome FilterCorpus(std::vector<BugRecord> const& corpus);

struct ReportRow {
  std::string bug_id;
  /// Indexed like kAllMetrics; absent when the comparison failed.
  std::optional<std::array<double, 4>> p_values;
  bool dagger = false;
  std::array<bool, 4> significant{};
  /// Why the row has no p-values.
  std::string error;
};

struct ComparisonReport {
  double alpha = 0.05;
  /// Sorted by bug_id.
  std::vector<ReportRow> rows;
};

/// Row with significance flags derived from `alpha`.
ReportRow MakeReportRow(std::string bug_id, std::array<double, 4> p_values,
                        bool dagger, double alpha);

struct ExperimentPair {
  ExperimentResults buggy;
  ExperimentResults corrected;
  bool allow_mismatch = false;
};

/// One row per pair, named by the buggy side's bug_identifier. A pair that
/// cannot be compared yields a row carrying the error instead of p-values.
ComparisonReport BuildReport(std::vector<ExperimentPair> const& pairs,
                             double alpha = 0.05);

/// Report from previously computed p-values. Each record holds bug_id,
/// dagger and p_accuracy/p_precision/p_recall/p_f1 as decimal strings, or
/// an error string in place of the p-values.
ComparisonReport ReportFromRecords(std::vector<Record> const& rows,
                                   double alpha = 0.05);

enum class ReportFormat { kTextTable, kCsv, kRecords };

/// Throws Error(kInvalidFormat) for anything but text-table, csv, records.
ReportFormat ParseReportFormat(std::string_view text);

/// Deterministic rendering; p-values with five decimals. text-table is a
/// Markdown table with significant values in bold and "†" after daggered
/// bug ids; records output can be read back by ReportFromRecords.
std::string RenderReport(ComparisonReport const& report, ReportFormat format);
std::string RenderReport(ComparisonReport const& report,
                         std::string_view format);

/// "%.5f".
std::string FormatPValue(double p);

}  // namespace repro

#endif  // REPRO_STUDY_H_
