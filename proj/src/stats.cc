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

#include "repro/stats.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "repro/errors.h"

namespace repro {

namespace {

double Ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

void RequireFinite(std::span<double const> values, char const* what) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidSample, std::string(what) + " is empty");
  }
  for (double v : values) {
    if (std::isnan(v)) {
      throw Error(ErrorCode::kInvalidSample,
                  std::string(what) + " contains NaN");
    }
  }
}

}  // namespace

RunMetrics MacroMetrics(ConfusionMatrix const& confusion) {
  auto const k = confusion.size();
  if (k < 2) {
    throw Error(ErrorCode::kInvalidConfusion, "need at least two classes");
  }
  std::int64_t total = 0;
  for (auto const& row : confusion) {
    if (row.size() != k) {
      throw Error(ErrorCode::kInvalidConfusion, "matrix must be square");
    }
    for (auto c : row) {
      if (c < 0) throw Error(ErrorCode::kInvalidConfusion, "negative count");
      total += c;
    }
  }
  if (total < 1) {
    throw Error(ErrorCode::kInvalidConfusion, "matrix holds no samples");
  }

  double acc = 0, prec = 0, rec = 0, f1 = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::int64_t const tp = confusion[c][c];
    std::int64_t predicted = 0, actual = 0;
    for (std::size_t r = 0; r < k; ++r) {
      predicted += confusion[r][c];
      actual += confusion[c][r];
    }
    std::int64_t const fp = predicted - tp;
    std::int64_t const fn = actual - tp;
    std::int64_t const tn = total - tp - fp - fn;

    double const p = Ratio(tp, tp + fp);
    double const r = Ratio(tp, tp + fn);
    prec += p;
    rec += r;
    f1 += Ratio(2 * p * r, p + r);
    acc += static_cast<double>(tp + tn) / static_cast<double>(total);
  }
  double const kd = static_cast<double>(k);
  return RunMetrics{0, acc / kd, prec / kd, rec / kd, f1 / kd};
}

std::vector<double> RankWithTies(std::span<double const> values) {
  RequireFinite(values, "sample");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto l, auto r) {
    return values[l] < values[r];
  });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    double const mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = mid;
    i = j;
  }
  return ranks;
}

std::string_view ToString(UTestMethod m) {
  return m == UTestMethod::kExact ? "exact" : "normal-approx";
}

double ErfcApprox(double x) {
  if (x < 0) return 2.0 - ErfcApprox(-x);
  constexpr double kP = 0.3275911;
  constexpr double kA1 = 0.254829592;
  constexpr double kA2 = -0.284496736;
  constexpr double kA3 = 1.421413741;
  constexpr double kA4 = -1.453152027;
  constexpr double kA5 = 1.061405429;
  double const t = 1.0 / (1.0 + kP * x);
  double const poly = t * (kA1 + t * (kA2 + t * (kA3 + t * (kA4 + t * kA5))));
  return poly * std::exp(-x * x);
}

std::uint64_t CountUAtMost(std::size_t n1, std::size_t n2, std::int64_t u) {
  if (u < 0) return 0;
  auto const max_u = static_cast<std::int64_t>(n1 * n2);
  // c[m][n] is the frequency table of U over arrangements of m and n items.
  std::vector<std::vector<std::vector<std::uint64_t>>> c(
      n1 + 1, std::vector<std::vector<std::uint64_t>>(n2 + 1));
  for (std::size_t m = 0; m <= n1; ++m) {
    for (std::size_t n = 0; n <= n2; ++n) {
      auto& cell = c[m][n];
      cell.assign(m * n + 1, 0);
      if (m == 0 || n == 0) {
        cell[0] = 1;
        continue;
      }
      for (std::size_t v = 0; v <= m * n; ++v) {
        std::uint64_t count = 0;
        if (v >= n && v - n <= (m - 1) * n) count += c[m - 1][n][v - n];
        if (v <= m * (n - 1)) count += c[m][n - 1][v];
        cell[v] = count;
      }
    }
  }
  auto const& dist = c[n1][n2];
  auto const top = std::min(u, max_u);
  std::uint64_t sum = 0;
  for (std::int64_t v = 0; v <= top; ++v) sum += dist[v];
  return sum;
}

UTestResult MannWhitneyU(std::span<double const> a, std::span<double const> b,
                         UTestMode mode) {
  RequireFinite(a, "sample_a");
  RequireFinite(b, "sample_b");

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  auto const ranks = RankWithTies(pooled);

  UTestResult r;
  r.n1 = a.size();
  r.n2 = b.size();
  double const n1 = static_cast<double>(r.n1);
  double const n2 = static_cast<double>(r.n2);
  double const r1 = std::accumulate(ranks.begin(), ranks.begin() + r.n1, 0.0);
  r.u1 = n1 * n2 + n1 * (n1 + 1) / 2 - r1;
  r.u2 = n1 * n2 - r.u1;
  assert(r.u1 + r.u2 == n1 * n2);
  r.u_statistic = std::min(r.u1, r.u2);

  bool cross_ties = false;
  for (double x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) {
      cross_ties = true;
      break;
    }
  }
  bool const exact_ok =
      !cross_ties && std::max(r.n1, r.n2) <= kMaxExactSampleSize;
  if (mode == UTestMode::kExact && !exact_ok) {
    throw Error(ErrorCode::kExactUnavailable,
                cross_ties ? "samples tie across groups"
                           : "sample too large for exact enumeration");
  }

  if (mode != UTestMode::kNormalApprox && exact_ok) {
    r.method = UTestMethod::kExact;
    // Without cross-sample ties u is an integer.
    auto const count = CountUAtMost(r.n1, r.n2,
                                    static_cast<std::int64_t>(r.u_statistic));
    std::uint64_t total = 1;
    for (std::size_t i = 1; i <= r.n2; ++i) {
      total = total * (r.n1 + i) / i;
    }
    r.p_value = std::min(
        1.0, 2.0 * static_cast<double>(count) / static_cast<double>(total));
    return r;
  }

  r.method = UTestMethod::kNormalApprox;
  double const n = n1 + n2;
  std::sort(pooled.begin(), pooled.end());
  double tie_sum = 0;
  for (std::size_t i = 0; i < pooled.size();) {
    std::size_t j = i + 1;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    double const t = static_cast<double>(j - i);
    tie_sum += t * t * t - t;
    i = j;
  }
  double const variance =
      n1 * n2 / 12.0 * ((n + 1) - (n > 1 ? tie_sum / (n * (n - 1)) : 0.0));
  if (!(variance > 0)) {
    r.degenerate = true;
    r.p_value = 1.0;
    return r;
  }
  double const mu = n1 * n2 / 2;
  double const z =
      std::max(0.0, (std::abs(r.u_statistic - mu) - 0.5) / std::sqrt(variance));
  // The erfc approximation is off by about 1e-9 at zero.
  r.p_value =
      z == 0 ? 1.0 : std::clamp(ErfcApprox(z / std::sqrt(2.0)), 0.0, 1.0);
  return r;
}

ComparisonResult CompareExperiments(ExperimentResults const& buggy,
                                    ExperimentResults const& corrected,
                                    double alpha, bool allow_mismatch) {
  auto const pair = ValidateExperimentPair(buggy.spec, corrected.spec);
  if (!pair.ok() && !allow_mismatch) {
    std::string msg;
    for (auto const& m : pair.mismatches) msg += (msg.empty() ? "" : "; ") + m;
    throw Error(ErrorCode::kPairMismatch, msg);
  }
  if (buggy.runs.empty() || corrected.runs.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                (buggy.runs.empty() ? buggy.spec.Key() : corrected.spec.Key()) +
                    " has no completed runs");
  }

  ComparisonResult out;
  out.alpha = alpha;
  out.overridden_mismatches = pair.mismatches;
  out.buggy_completed = buggy.runs.size();
  out.corrected_completed = corrected.runs.size();
  out.k = std::min(out.buggy_completed, out.corrected_completed);
  out.dagger = buggy.shortfall() || corrected.shortfall();

  auto first_k = [k = out.k](std::vector<RunMetrics> runs) {
    std::ranges::sort(runs, {}, &RunMetrics::run_index);
    runs.resize(k);
    return runs;
  };
  auto const lhs = first_k(buggy.runs);
  auto const rhs = first_k(corrected.runs);

  for (std::size_t i = 0; i < kAllMetrics.size(); ++i) {
    std::vector<double> a, b;
    for (auto const& run : lhs) a.push_back(run.Get(kAllMetrics[i]));
    for (auto const& run : rhs) b.push_back(run.Get(kAllMetrics[i]));
    out.tests[i] = MannWhitneyU(a, b, UTestMode::kAuto);
    out.significant[i] = out.tests[i].p_value < alpha;
  }
  return out;
}

MetricSummary Summarize(std::span<double const> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInsufficientData, "no values to summarize");
  }
  MetricSummary s;
  s.count = values.size();
  auto [lo, hi] = std::ranges::minmax_element(values);
  s.min = *lo;
  s.max = *hi;
  double const n = static_cast<double>(s.count);
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (s.count >= 2 && s.min == s.max) {
    s.stddev = 0.0;
  } else if (s.count >= 2) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (n - 1));
  }
  return s;
}

DescriptiveSummary Descriptive(ExperimentResults const& results) {
  if (results.runs.empty()) {
    throw Error(ErrorCode::kInsufficientData,
                results.spec.Key() + " has no completed runs");
  }
  DescriptiveSummary d;
  for (std::size_t i = 0; i < kAllMetrics.size(); ++i) {
    std::vector<double> values;
    for (auto const& run : results.runs) {
      values.push_back(run.Get(kAllMetrics[i]));
    }
    d.metrics[i] = Summarize(values);
  }
  return d;
}

}  // namespace repro
