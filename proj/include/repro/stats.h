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

#ifndef REPRO_STATS_H_
#define REPRO_STATS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repro/core_model.h"

namespace repro {

using ConfusionMatrix = std::vector<std::vector<std::int64_t>>;

/// Macro-averaged metrics of a K x K confusion matrix (rows are the true
/// class, columns the prediction). Each metric is computed one-vs-rest per
/// class and averaged without weighting; zero denominators contribute 0.
/// The returned run_index is 0.
///
/// Throws Error(kInvalidConfusion) for ragged or negative matrices, K < 2
/// or an all-zero matrix.
RunMetrics MacroMetrics(ConfusionMatrix const& confusion);

/// Ranks 1..n in input order; ties share the mean of the ranks they span.
/// Throws Error(kInvalidSample) on empty input or NaN.
std::vector<double> RankWithTies(std::span<double const> values);

enum class UTestMethod { kExact, kNormalApprox };
enum class UTestMode { kAuto, kExact, kNormalApprox };

std::string_view ToString(UTestMethod m);

struct UTestResult {
  /// min(U1, U2).
  double u_statistic = 0;
  double u1 = 0;
  double u2 = 0;
  /// Two-tailed.
  double p_value = 1.0;
  UTestMethod method = UTestMethod::kNormalApprox;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  /// All pooled values identical; p is reported as 1.
  bool degenerate = false;
};

inline constexpr std::size_t kMaxExactSampleSize = 10;

/// erfc(x) by Abramowitz-Stegun 7.1.26, absolute error <= 1.5e-7. Odd
/// symmetry is used for x < 0.
double ErfcApprox(double x);

/// Number of arrangements of n1 + n2 distinct ranks whose U statistic is at
/// most `u`, by the counting recurrence
///   c(m, n, u) = c(m - 1, n, u - n) + c(m, n - 1, u).
std::uint64_t CountUAtMost(std::size_t n1, std::size_t n2, std::int64_t u);

/// Non-paired two-tailed Wilcoxon-Mann-Whitney U-test.
///
/// Exact: p = min(1, 2 * P(U <= u)). NormalApprox uses the tie-corrected
/// variance and a 0.5 continuity correction; z is floored at 0 so that the
/// correction cannot push p above 1.
///
/// Throws Error(kInvalidSample) for an empty sample or NaN, and
/// Error(kExactUnavailable) when kExact is forced on samples that are too
/// large or tie across the two samples.
UTestResult MannWhitneyU(std::span<double const> a, std::span<double const> b,
                         UTestMode mode = UTestMode::kAuto);

struct ComparisonResult {
  /// Runs compared per side.
  std::size_t k = 0;
  std::size_t buggy_completed = 0;
  std::size_t corrected_completed = 0;
  /// Either side finished fewer runs than planned.
  bool dagger = false;
  double alpha = 0.05;
  /// Indexed like kAllMetrics.
  std::array<UTestResult, 4> tests{};
  std::array<bool, 4> significant{};
  /// Pair validation problems that were overridden.
  std::vector<std::string> overridden_mismatches;
};

/// Compares the first k = min(completed) runs (by run_index) of each side,
/// metric by metric. Throws Error(kInsufficientData) when either side has no
/// runs and Error(kPairMismatch) when the specs do not form a valid pair and
/// `allow_mismatch` is false.
ComparisonResult CompareExperiments(ExperimentResults const& buggy,
                                    ExperimentResults const& corrected,
                                    double alpha = 0.05,
                                    bool allow_mismatch = false);

struct MetricSummary {
  double mean = 0;
  /// Sample standard deviation (divisor N - 1); absent below two runs.
  std::optional<double> stddev;
  double min = 0;
  double max = 0;
  std::size_t count = 0;
};

struct DescriptiveSummary {
  std::array<MetricSummary, 4> metrics{};

  MetricSummary const& Get(Metric m) const {
    return metrics[static_cast<std::size_t>(m)];
  }
};

/// Throws Error(kInsufficientData) when there are no runs.
DescriptiveSummary Descriptive(ExperimentResults const& results);
MetricSummary Summarize(std::span<double const> values);

}  // namespace repro

#endif  // REPRO_STATS_H_
