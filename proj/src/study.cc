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

#include "repro/study.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "repro/errors.h"
#include "repro/stats.h"

namespace repro {

namespace {

constexpr std::array<std::string_view, 5> kRejectionNames = {
    "COMPILE_ERROR", "RUNTIME_CRASH", "USER_CODE", "CPU_ONLY",
    "NO_AFFECTED_APP"};
constexpr std::array<std::string_view, 2> kFavourNames = {"GRADIENTS",
                                                          "MATH_FUNCTIONS"};
constexpr std::array<std::string_view, 4> kStageNames = {
    "collected", "filtered", "built", "evaluated"};

template <class Enum, std::size_t N>
std::optional<Enum> ParseName(std::array<std::string_view, N> const& names,
                              std::string_view text) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == text) return static_cast<Enum>(i);
  }
  return std::nullopt;
}

template <class Enum>
bool HasDuplicates(std::vector<Enum> const& values) {
  std::set<Enum> seen(values.begin(), values.end());
  return seen.size() != values.size();
}

constexpr std::array<std::string_view, 4> kPValueKeys = {
    "p_accuracy", "p_precision", "p_recall", "p_f1"};

}  // namespace

std::string_view ToString(RejectionCode c) {
  return kRejectionNames[static_cast<std::size_t>(c)];
}
std::string_view ToString(FavourTag t) {
  return kFavourNames[static_cast<std::size_t>(t)];
}
std::string_view ToString(BugStage s) {
  return kStageNames[static_cast<std::size_t>(s)];
}
std::optional<RejectionCode> ParseRejectionCode(std::string_view text) {
  return ParseName<RejectionCode>(kRejectionNames, text);
}
std::optional<FavourTag> ParseFavourTag(std::string_view text) {
  return ParseName<FavourTag>(kFavourNames, text);
}
std::optional<BugStage> ParseBugStage(std::string_view text) {
  return ParseName<BugStage>(kStageNames, text);
}

void Validate(BugRecord const& bug) {
  auto fail = [&](std::string const& msg) {
    throw Error(ErrorCode::kInvalidRecord, "bug '" + bug.bug_id + "': " + msg);
  };
  if (bug.bug_id.empty()) fail("bug_id must not be empty");
  if (bug.buggy_revision.empty() || bug.corrected_revision.empty()) {
    fail("both revisions are required");
  }
  if (bug.buggy_revision == bug.corrected_revision) {
    fail("buggy and corrected revisions must differ");
  }
  if (HasDuplicates(bug.rejection_codes)) fail("duplicate rejection code");
  if (HasDuplicates(bug.favour_tags)) fail("duplicate favour tag");
  if (bug.rejected() && bug.stage != BugStage::kCollected) {
    fail("a rejected bug cannot advance past collected");
  }
}

Record ToRecord(BugRecord const& bug) {
  Record codes = Record::array();
  for (auto c : bug.rejection_codes) codes.push_back(ToString(c));
  Record tags = Record::array();
  for (auto t : bug.favour_tags) tags.push_back(ToString(t));
  return Record{
      {"bug_id", bug.bug_id},
      {"buggy_revision", bug.buggy_revision},
      {"corrected_revision", bug.corrected_revision},
      {"favour_tags", std::move(tags)},
      {"pr_number", bug.pr_number},
      {"rejection_codes", std::move(codes)},
      {"stage", ToString(bug.stage)},
  };
}

BugRecord BugFromRecord(Record const& record) {
  BugRecord bug;
  bug.bug_id = RequireString(record, "bug_id");
  bug.pr_number = RequireUnsigned(record, "pr_number");
  bug.buggy_revision = RequireString(record, "buggy_revision");
  bug.corrected_revision = RequireString(record, "corrected_revision");
  for (auto const& c : RequireArray(record, "rejection_codes")) {
    auto code = c.is_string() ? ParseRejectionCode(c.get<std::string>())
                              : std::nullopt;
    if (!code) {
      throw Error(ErrorCode::kInvalidRecord,
                  "unknown rejection code " + c.dump());
    }
    bug.rejection_codes.push_back(*code);
  }
  if (record.contains("favour_tags")) {
    for (auto const& t : RequireArray(record, "favour_tags")) {
      auto tag =
          t.is_string() ? ParseFavourTag(t.get<std::string>()) : std::nullopt;
      if (!tag) {
        throw Error(ErrorCode::kInvalidRecord, "unknown favour tag " + t.dump());
      }
      bug.favour_tags.push_back(*tag);
    }
  }
  auto stage = ParseBugStage(RequireString(record, "stage"));
  if (!stage) throw Error(ErrorCode::kInvalidRecord, "unknown stage");
  bug.stage = *stage;
  Validate(bug);
  return bug;
}

std::vector<BugRecord> LoadCorpus(std::filesystem::path const& path) {
  std::vector<BugRecord> corpus;
  for (auto const& r : ReadRecordsFile(path)) {
    corpus.push_back(BugFromRecord(r));
  }
  return corpus;
}

FilterOutcome FilterCorpus(std::vector<BugRecord> const& corpus) {
  FilterOutcome out;
  for (auto const& bug : corpus) {
    if (bug.rejected()) {
      out.rejected[bug.rejection_codes.front()].push_back(bug);
    } else {
      out.accepted.push_back(bug);
    }
  }
  std::stable_partition(out.accepted.begin(), out.accepted.end(),
                        [](BugRecord const& b) { return !b.favour_tags.empty(); });
  return out;
}

ReportRow MakeReportRow(std::string bug_id, std::array<double, 4> p_values,
                        bool dagger, double alpha) {
  ReportRow row;
  row.bug_id = std::move(bug_id);
  row.dagger = dagger;
  for (std::size_t i = 0; i < 4; ++i) {
    row.significant[i] = p_values[i] < alpha;
  }
  row.p_values = p_values;
  return row;
}

namespace {

void SortRows(std::vector<ReportRow>& rows) {
  std::ranges::stable_sort(rows, {}, &ReportRow::bug_id);
}

}  // namespace

ComparisonReport BuildReport(std::vector<ExperimentPair> const& pairs,
                             double alpha) {
  ComparisonReport report;
  report.alpha = alpha;
  for (auto const& pair : pairs) {
    auto const& id = pair.buggy.spec.bug_identifier;
    try {
      auto cmp = CompareExperiments(pair.buggy, pair.corrected, alpha,
                                    pair.allow_mismatch);
      std::array<double, 4> p{};
      for (std::size_t i = 0; i < 4; ++i) p[i] = cmp.tests[i].p_value;
      report.rows.push_back(MakeReportRow(id, p, cmp.dagger, alpha));
    } catch (Error const& e) {
      if (e.code() != ErrorCode::kInsufficientData &&
          e.code() != ErrorCode::kPairMismatch) {
        throw;
      }
      ReportRow row;
      row.bug_id = id;
      row.dagger = pair.buggy.shortfall() || pair.corrected.shortfall();
      row.error = e.what();
      report.rows.push_back(std::move(row));
    }
  }
  SortRows(report.rows);
  return report;
}

ComparisonReport ReportFromRecords(std::vector<Record> const& rows,
                                   double alpha) {
  ComparisonReport report;
  report.alpha = alpha;
  for (auto const& r : rows) {
    auto const& id = RequireString(r, "bug_id");
    bool const dagger = r.contains("dagger") && RequireBool(r, "dagger");
    if (r.contains("error")) {
      ReportRow row;
      row.bug_id = id;
      row.dagger = dagger;
      row.error = RequireString(r, "error");
      report.rows.push_back(std::move(row));
      continue;
    }
    std::array<double, 4> p{};
    for (std::size_t i = 0; i < 4; ++i) {
      auto v = ParseReal(RequireString(r, kPValueKeys[i]));
      if (!v || !InUnitInterval(*v)) {
        throw Error(ErrorCode::kInvalidRecord,
                    id + ": " + std::string(kPValueKeys[i]) +
                        " must be a decimal in [0,1]");
      }
      p[i] = *v;
    }
    report.rows.push_back(MakeReportRow(id, p, dagger, alpha));
  }
  SortRows(report.rows);
  return report;
}

ReportFormat ParseReportFormat(std::string_view text) {
  if (text == "text-table") return ReportFormat::kTextTable;
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "records") return ReportFormat::kRecords;
  throw Error(ErrorCode::kInvalidFormat,
              "unknown report format '" + std::string(text) + "'");
}

std::string FormatPValue(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f", p);
  return buf;
}

namespace {

std::string CsvField(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(text);
  }
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string RenderTextTable(ComparisonReport const& report) {
  std::string out = "| bug | accuracy | precision | recall | f1 |\n";
  out += "|---|---|---|---|---|\n";
  for (auto const& row : report.rows) {
    out += "| " + row.bug_id + (row.dagger ? "†" : "");
    for (std::size_t i = 0; i < 4; ++i) {
      if (!row.p_values) {
        out += " | -";
        continue;
      }
      auto const v = FormatPValue((*row.p_values)[i]);
      out += row.significant[i] ? " | **" + v + "**" : " | " + v;
    }
    out += " |";
    if (!row.error.empty()) out += " " + row.error;
    out += "\n";
  }
  return out;
}

std::string RenderCsv(ComparisonReport const& report) {
  std::string out =
      "bug_id,dagger,p_accuracy,p_precision,p_recall,p_f1,significant,error\n";
  for (auto const& row : report.rows) {
    out += CsvField(row.bug_id);
    out += row.dagger ? ",true" : ",false";
    std::string significant;
    for (std::size_t i = 0; i < 4; ++i) {
      out += ",";
      if (row.p_values) out += FormatPValue((*row.p_values)[i]);
      if (row.significant[i]) {
        if (!significant.empty()) significant += ";";
        significant += ToString(kAllMetrics[i]);
      }
    }
    out += "," + significant + "," + CsvField(row.error) + "\n";
  }
  return out;
}

std::string RenderRecords(ComparisonReport const& report) {
  std::string out;
  for (auto const& row : report.rows) {
    Record r{{"bug_id", row.bug_id}, {"dagger", row.dagger}};
    if (row.p_values) {
      Record significant = Record::array();
      for (std::size_t i = 0; i < 4; ++i) {
        r[std::string(kPValueKeys[i])] = FormatReal((*row.p_values)[i]);
        if (row.significant[i]) {
          significant.push_back(ToString(kAllMetrics[i]));
        }
      }
      r["significant"] = std::move(significant);
    } else {
      r["error"] = row.error;
    }
    out += EncodeRecord(r) + "\n";
  }
  return out;
}

}  // namespace

std::string RenderReport(ComparisonReport const& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kTextTable:
      return RenderTextTable(report);
    case ReportFormat::kCsv:
      return RenderCsv(report);
    case ReportFormat::kRecords:
      return RenderRecords(report);
  }
  throw Error(ErrorCode::kInvalidFormat, "unknown report format");
}

std::string RenderReport(ComparisonReport const& report,
                         std::string_view format) {
  return RenderReport(report, ParseReportFormat(format));
}

}  // namespace repro
