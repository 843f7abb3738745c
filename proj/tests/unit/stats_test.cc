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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "repro/errors.h"
#include "test_util.h"

namespace repro {
namespace {

using testing::MakeSpec;
using testing::ResultsWith;

ErrorCode CodeOf(std::function<void()> const& fn) {
  try {
    fn();
  } catch (Error const& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

// Per-class metrics by classifying every sample cell individually.
RunMetrics BruteForceMacro(ConfusionMatrix const& m) {
  std::size_t const k = m.size();
  double acc = 0, prec = 0, rec = 0, f1 = 0;
  for (std::size_t c = 0; c < k; ++c) {
    double tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t t = 0; t < k; ++t) {
      for (std::size_t p = 0; p < k; ++p) {
        double n = static_cast<double>(m[t][p]);
        if (t == c && p == c) tp += n;
        else if (p == c) fp += n;
        else if (t == c) fn += n;
        else tn += n;
      }
    }
    double pc = tp + fp > 0 ? tp / (tp + fp) : 0;
    double rc = tp + fn > 0 ? tp / (tp + fn) : 0;
    prec += pc;
    rec += rc;
    f1 += pc + rc > 0 ? 2 * pc * rc / (pc + rc) : 0;
    acc += (tp + tn) / (tp + fp + fn + tn);
  }
  return RunMetrics{0, acc / k, prec / k, rec / k, f1 / k};
}

// p by enumerating every way to choose which pooled ranks belong to `a`.
double EnumeratedExactP(std::size_t n1, std::size_t n2, double u) {
  std::size_t const n = n1 + n2;
  std::uint64_t at_most = 0, total = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != n1) continue;
    ++total;
    // U for sample b: pairs (a, b) with a < b, ranks 0..n-1.
    double ub = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!(mask >> j & 1)) ub += 1;
      }
    }
    double ua = static_cast<double>(n1 * n2) - ub;
    if (ua <= u) ++at_most;
  }
  return std::min(1.0, 2.0 * static_cast<double>(at_most) /
                           static_cast<double>(total));
}

TEST(MacroMetricsTest, PerfectClassifier) {
  auto m = MacroMetrics({{5, 0}, {0, 5}});
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1, 1.0);
}

TEST(MacroMetricsTest, TwoByTwoOracle) {
  auto m = MacroMetrics({{3, 1}, {2, 4}});
  EXPECT_NEAR(m.precision, 0.7, 1e-12);
  EXPECT_NEAR(m.recall, 0.7083333333333334, 1e-12);
  EXPECT_NEAR(m.accuracy, 0.7, 1e-12);
  EXPECT_NEAR(m.f1, 0.6969696969696970, 1e-12);
}

TEST(MacroMetricsTest, NeverPredictedClassContributesZero) {
  auto m = MacroMetrics({{4, 0, 0}, {2, 0, 0}, {0, 0, 3}});
  EXPECT_TRUE(std::isfinite(m.precision));
  EXPECT_NEAR(m.precision, (4.0 / 6 + 0 + 1) / 3, 1e-12);
  EXPECT_NEAR(m.recall, (1 + 0 + 1) / 3.0, 1e-12);
}

TEST(MacroMetricsTest, InvalidMatrices) {
  EXPECT_EQ(CodeOf([] { MacroMetrics({{1}}); }), ErrorCode::kInvalidConfusion);
  EXPECT_EQ(CodeOf([] { MacroMetrics({{1, 2}, {3}}); }),
            ErrorCode::kInvalidConfusion);
  EXPECT_EQ(CodeOf([] { MacroMetrics({{1, -2}, {3, 4}}); }),
            ErrorCode::kInvalidConfusion);
  EXPECT_EQ(CodeOf([] { MacroMetrics({{0, 0}, {0, 0}}); }),
            ErrorCode::kInvalidConfusion);
}

TEST(MacroMetricsTest, MatchesBruteForceOnRandomMatrices) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t k = 2 + rng() % 9;
    ConfusionMatrix m(k, std::vector<std::int64_t>(k));
    for (auto& row : m) {
      for (auto& cell : row) cell = rng() % 3 == 0 ? 0 : rng() % 20;
    }
    m[0][0] += 1;
    auto got = MacroMetrics(m);
    auto want = BruteForceMacro(m);
    EXPECT_NEAR(got.accuracy, want.accuracy, 1e-12);
    EXPECT_NEAR(got.precision, want.precision, 1e-12);
    EXPECT_NEAR(got.recall, want.recall, 1e-12);
    EXPECT_NEAR(got.f1, want.f1, 1e-12);
    Validate(got);
  }
}

TEST(RankWithTiesTest, Examples) {
  std::vector<double> a{10, 20, 30}, b{5, 5}, c{7, 3, 7};
  EXPECT_EQ(RankWithTies(a), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(RankWithTies(b), (std::vector<double>{1.5, 1.5}));
  EXPECT_EQ(RankWithTies(c), (std::vector<double>{2.5, 1, 2.5}));
}

TEST(RankWithTiesTest, Errors) {
  std::vector<double> empty, nan{1, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_EQ(CodeOf([&] { RankWithTies(empty); }), ErrorCode::kInvalidSample);
  EXPECT_EQ(CodeOf([&] { RankWithTies(nan); }), ErrorCode::kInvalidSample);
}

TEST(RankWithTiesTest, RanksSumToTriangularNumber) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + rng() % 40);
    for (auto& x : v) x = rng() % 10;
    auto r = RankWithTies(v);
    double sum = 0;
    for (double x : r) sum += x;
    double n = static_cast<double>(v.size());
    EXPECT_EQ(sum, n * (n + 1) / 2);
  }
}

TEST(ErfcApproxTest, CloseToStdErfc) {
  for (double x = -4; x <= 6; x += 0.01) {
    EXPECT_NEAR(ErfcApprox(x), std::erfc(x), 1.5e-7) << x;
  }
}

TEST(CountUAtMostTest, SmallDistributions) {
  // C(4,2) = 6 arrangements: U in {0,1,2,2,3,4}.
  EXPECT_EQ(CountUAtMost(2, 2, -1), 0u);
  EXPECT_EQ(CountUAtMost(2, 2, 0), 1u);
  EXPECT_EQ(CountUAtMost(2, 2, 2), 4u);
  EXPECT_EQ(CountUAtMost(2, 2, 4), 6u);
  EXPECT_EQ(CountUAtMost(10, 10, 100), 184756u);
}

TEST(MannWhitneyUTest, SeparatedTriples) {
  std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  auto r = MannWhitneyU(a, b, UTestMode::kExact);
  EXPECT_EQ(r.u_statistic, 0);
  EXPECT_EQ(r.p_value, 0.1);
  EXPECT_EQ(r.method, UTestMethod::kExact);
  EXPECT_EQ(MannWhitneyU(a, b).method, UTestMethod::kExact);
}

TEST(MannWhitneyUTest, InterleavedQuads) {
  std::vector<double> a{1, 3, 5, 7}, b{2, 4, 6, 8};
  auto r = MannWhitneyU(a, b);
  EXPECT_EQ(r.u_statistic, 6);
  EXPECT_EQ(r.u1 + r.u2, 16);
  EXPECT_DOUBLE_EQ(r.p_value, 24.0 / 35.0);
}

TEST(MannWhitneyUTest, IdenticalSamples) {
  std::vector<double> a{0.1, 0.2, 0.3, 0.4};
  auto r = MannWhitneyU(a, a);
  EXPECT_EQ(r.u1, 8);
  EXPECT_EQ(r.u2, 8);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.method, UTestMethod::kNormalApprox);
  EXPECT_EQ(CodeOf([&] { MannWhitneyU(a, a, UTestMode::kExact); }),
            ErrorCode::kExactUnavailable);
}

TEST(MannWhitneyUTest, AllValuesEqualIsDegenerate) {
  std::vector<double> a(5, 0.7), b(6, 0.7);
  auto r = MannWhitneyU(a, b);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.method, UTestMethod::kNormalApprox);
}

TEST(MannWhitneyUTest, Errors) {
  std::vector<double> empty, one{1}, big(11);
  for (std::size_t i = 0; i < big.size(); ++i) big[i] = i + 0.5;
  EXPECT_EQ(CodeOf([&] { MannWhitneyU(empty, one); }),
            ErrorCode::kInvalidSample);
  EXPECT_EQ(CodeOf([&] { MannWhitneyU(one, empty); }),
            ErrorCode::kInvalidSample);
  EXPECT_EQ(CodeOf([&] { MannWhitneyU(big, one, UTestMode::kExact); }),
            ErrorCode::kExactUnavailable);
  EXPECT_EQ(MannWhitneyU(big, one).method, UTestMethod::kNormalApprox);
}

TEST(MannWhitneyUTest, ExactMatchesEnumeration) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n1 = 1 + rng() % 7, n2 = 1 + rng() % 7;
    std::vector<double> pool(n1 + n2);
    std::iota(pool.begin(), pool.end(), 0.0);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<double> a(pool.begin(), pool.begin() + n1),
        b(pool.begin() + n1, pool.end());
    auto r = MannWhitneyU(a, b, UTestMode::kExact);
    EXPECT_EQ(r.p_value, EnumeratedExactP(n1, n2, r.u_statistic));
  }
}

TEST(MannWhitneyUTest, SwappingSamplesIsSymmetric) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(1 + rng() % 30), b(1 + rng() % 30);
    for (auto& x : a) x = rng() % 25;
    for (auto& x : b) x = rng() % 25;
    auto ab = MannWhitneyU(a, b);
    auto ba = MannWhitneyU(b, a);
    EXPECT_EQ(ab.u1, ba.u2);
    EXPECT_EQ(ab.u2, ba.u1);
    EXPECT_EQ(ab.u_statistic, ba.u_statistic);
    EXPECT_EQ(ab.p_value, ba.p_value);
    EXPECT_GE(ab.p_value, 0.0);
    EXPECT_LE(ab.p_value, 1.0);
    EXPECT_EQ(ab.u1 + ab.u2, static_cast<double>(a.size() * b.size()));
  }
}

TEST(MannWhitneyUTest, ApproximationCloseToExactForMediumSamples) {
  std::mt19937 rng(6);
  double worst = 0;
  for (std::size_t n = 5; n <= 10; ++n) {
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<double> pool(2 * n);
      std::iota(pool.begin(), pool.end(), 0.0);
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<double> a(pool.begin(), pool.begin() + n),
          b(pool.begin() + n, pool.end());
      auto exact = MannWhitneyU(a, b, UTestMode::kExact);
      auto approx = MannWhitneyU(a, b, UTestMode::kNormalApprox);
      worst = std::max(worst, std::abs(exact.p_value - approx.p_value));
    }
  }
  EXPECT_LE(worst, 0.02);
}

TEST(MannWhitneyUTest, TranslationDrivesUToZero) {
  std::mt19937 rng(12);
  for (std::size_t n : {3u, 6u, 10u, 30u}) {
    std::vector<double> a(n), b(n);
    for (auto& x : a) x = rng() % 100;
    for (auto& x : b) x = rng() % 100 + 1000;
    auto r = MannWhitneyU(a, b);
    EXPECT_EQ(r.u_statistic, 0);
    if (n <= 10) {
      // Minimum two-tailed p: 2 / C(2n, n).
      EXPECT_EQ(r.p_value, 2.0 / static_cast<double>(CountUAtMost(n, n, n * n)));
    } else {
      EXPECT_LT(r.p_value, 1e-9);
    }
  }
}

TEST(MannWhitneyUTest, RejectionRateUnderNullHypothesis) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> dist(0.7, 0.003);
  int rejections = 0;
  int tests = 0;
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<double> a(50), b(50);
    for (auto& x : a) x = dist(rng);
    for (auto& x : b) x = dist(rng);
    rejections += MannWhitneyU(a, b).p_value < 0.05;
    ++tests;
  }
  double rate = static_cast<double>(rejections) / tests;
  EXPECT_GE(rate, 0.02);
  EXPECT_LE(rate, 0.09);
}

TEST(CompareExperimentsTest, TruncatesAndMarksDagger) {
  std::vector<double> fifty(50), forty_three(43);
  for (std::size_t i = 0; i < 50; ++i) fifty[i] = 0.5 + i * 1e-4;
  for (std::size_t i = 0; i < 43; ++i) forty_three[i] = 0.5 + i * 1e-4;
  auto buggy = ResultsWith(MakeSpec("pr1", EvaluationType::kBuggy, 50), fifty);
  auto corrected =
      ResultsWith(MakeSpec("pr1", EvaluationType::kCorrected, 50), forty_three);
  auto r = CompareExperiments(buggy, corrected);
  EXPECT_EQ(r.k, 43u);
  EXPECT_TRUE(r.dagger);
  EXPECT_EQ(r.buggy_completed, 50u);
  EXPECT_EQ(r.corrected_completed, 43u);
  // Identical first 43 runs on both sides.
  for (auto const& t : r.tests) EXPECT_EQ(t.p_value, 1.0);
}

TEST(CompareExperimentsTest, TruncationUsesLowestRunIndices) {
  auto buggy = ResultsWith(MakeSpec("pr1", EvaluationType::kBuggy, 4),
                           {0.1, 0.2, 0.3, 0.9});
  std::reverse(buggy.runs.begin(), buggy.runs.end());
  auto corrected = ResultsWith(MakeSpec("pr1", EvaluationType::kCorrected, 4),
                               {0.1, 0.2, 0.3});
  auto r = CompareExperiments(buggy, corrected);
  EXPECT_EQ(r.k, 3u);
  EXPECT_EQ(r.tests[0].p_value, 1.0);
}

TEST(CompareExperimentsTest, IdenticalRunsNothingSignificant) {
  std::vector<double> v{0.70, 0.71, 0.69, 0.72, 0.70};
  auto r = CompareExperiments(
      ResultsWith(MakeSpec("pr1", EvaluationType::kBuggy), v),
      ResultsWith(MakeSpec("pr1", EvaluationType::kCorrected), v));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.tests[i].p_value, 1.0);
    EXPECT_FALSE(r.significant[i]);
  }
  EXPECT_FALSE(r.dagger);
}

TEST(CompareExperimentsTest, SeparatedSamplesAllSignificant) {
  std::vector<double> lo(50), hi(50);
  for (std::size_t i = 0; i < 50; ++i) {
    lo[i] = 0.70 + i * 1e-6;
    hi[i] = 0.72 + i * 1e-6;
  }
  auto r = CompareExperiments(
      ResultsWith(MakeSpec("pr1", EvaluationType::kBuggy, 50), lo),
      ResultsWith(MakeSpec("pr1", EvaluationType::kCorrected, 50), hi), 0.05);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(r.tests[i].u_statistic, 0);
    EXPECT_TRUE(r.significant[i]);
  }
}

TEST(CompareExperimentsTest, Errors) {
  auto b = ResultsWith(MakeSpec("pr1", EvaluationType::kBuggy), {0.5});
  auto c = ResultsWith(MakeSpec("pr1", EvaluationType::kCorrected), {});
  EXPECT_EQ(CodeOf([&] { CompareExperiments(b, c); }),
            ErrorCode::kInsufficientData);
  auto other = ResultsWith(MakeSpec("pr1", EvaluationType::kCorrected), {0.5});
  other.spec.model = "alexnet";
  EXPECT_EQ(CodeOf([&] { CompareExperiments(b, other); }),
            ErrorCode::kPairMismatch);
  auto r = CompareExperiments(b, other, 0.05, true);
  EXPECT_EQ(r.overridden_mismatches, std::vector<std::string>{"model"});
}

TEST(DescriptiveTest, TextbookValues) {
  auto d = Descriptive(ResultsWith(MakeSpec("pr1", EvaluationType::kBuggy),
                                   {0.1, 0.2, 0.3}));
  std::vector<double> v{1, 2, 3};
  auto s = Summarize(v);
  EXPECT_EQ(s.mean, 2);
  EXPECT_EQ(s.stddev, 1.0);
  EXPECT_EQ(s.min, 1);
  EXPECT_EQ(s.max, 3);
  EXPECT_EQ(s.count, 3u);
  EXPECT_NEAR(d.Get(Metric::kRecall).mean, 0.2, 1e-15);
  EXPECT_NEAR(*d.Get(Metric::kF1).stddev, 0.1, 1e-15);
}

TEST(DescriptiveTest, ConstantAndSingleRun) {
  auto d = Descriptive(
      ResultsWith(MakeSpec("pr1", EvaluationType::kBuggy), {0.4, 0.4, 0.4}));
  EXPECT_EQ(d.Get(Metric::kAccuracy).stddev, 0.0);
  auto one =
      Descriptive(ResultsWith(MakeSpec("pr1", EvaluationType::kBuggy), {0.4}));
  EXPECT_FALSE(one.Get(Metric::kAccuracy).stddev.has_value());
  EXPECT_EQ(CodeOf([] {
              Descriptive(ResultsWith(MakeSpec("pr1", EvaluationType::kBuggy),
                                      {}));
            }),
            ErrorCode::kInsufficientData);
}

TEST(DescriptiveTest, SampleStdWithinChiSquareBand) {
  // For N = 50 and sigma = 0.003, the central 99% of sample std values lies
  // within sigma * sqrt(chi2_{49; 0.005, 0.995} / 49) = [0.00224, 0.00379];
  // P(0.002 <= s <= 0.004) = 0.9991.
  std::mt19937_64 rng(77);
  std::normal_distribution<double> dist(0.7, 0.003);
  int inside = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(50);
    for (auto& x : v) x = dist(rng);
    double s = *Summarize(v).stddev;
    inside += s >= 0.002 && s <= 0.004;
  }
  EXPECT_GE(inside, 190);
}

}  // namespace
}  // namespace repro
