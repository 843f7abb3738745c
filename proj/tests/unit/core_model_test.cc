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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "repro/errors.h"
#include "test_util.h"

namespace repro {
namespace {

using testing::MakeSpec;

TEST(ExperimentSpecTest, KeyCombinesBugAndEvaluation) {
  auto s = MakeSpec("study-pr31433", EvaluationType::kBuggy);
  EXPECT_EQ(s.Key(), "study-pr31433/buggy");
  s.evaluation_type = EvaluationType::kCorrected;
  EXPECT_EQ(s.Key(), "study-pr31433/corrected");
}

TEST(ExperimentSpecTest, ValidateRejectsBadFields) {
  auto s = MakeSpec("pr1", EvaluationType::kBuggy);
  EXPECT_NO_THROW(Validate(s));
  auto bad = s;
  bad.bug_identifier.clear();
  EXPECT_THROW(Validate(bad), Error);
  bad = s;
  bad.bug_identifier = "a/b";
  EXPECT_THROW(Validate(bad), Error);
  bad = s;
  bad.epochs = 0;
  EXPECT_THROW(Validate(bad), Error);
  bad = s;
  bad.planned_runs = 0;
  EXPECT_THROW(Validate(bad), Error);
}

TEST(ExperimentSpecTest, RecordRoundTripIsByteExact) {
  auto s = MakeSpec("pr1", EvaluationType::kCorrected);
  s.state = 18446744073709551615ULL;
  auto text = EncodeRecord(ToRecord(s));
  EXPECT_NE(text.find("\"state\":\"18446744073709551615\""), std::string::npos);
  auto back = SpecFromRecord(DecodeRecord(text));
  EXPECT_EQ(back, s);
  EXPECT_EQ(EncodeRecord(ToRecord(back)), text);
}

TEST(ExperimentSpecTest, FromRecordRejectsUnknownEvaluation) {
  auto r = ToRecord(MakeSpec("pr1", EvaluationType::kBuggy));
  r["evaluation_type"] = "fixed";
  EXPECT_THROW(SpecFromRecord(r), Error);
  r = ToRecord(MakeSpec("pr1", EvaluationType::kBuggy));
  r["state"] = 5;
  EXPECT_THROW(SpecFromRecord(r), Error);
}

TEST(PairValidationTest, OnlyEvaluationAndArtifactMayDiffer) {
  auto b = MakeSpec("pr1", EvaluationType::kBuggy);
  auto c = MakeSpec("pr1", EvaluationType::kCorrected);
  b.artifact = "rev-a";
  c.artifact = "rev-b";
  EXPECT_TRUE(ValidateExperimentPair(b, c).ok());
}

TEST(PairValidationTest, StateMismatch) {
  auto b = MakeSpec("pr1", EvaluationType::kBuggy);
  auto c = MakeSpec("pr1", EvaluationType::kCorrected);
  b.state = 1;
  c.state = 2;
  EXPECT_EQ(ValidateExperimentPair(b, c).mismatches,
            std::vector<std::string>{"state"});
}

TEST(PairValidationTest, SameEvaluationType) {
  auto b = MakeSpec("pr1", EvaluationType::kBuggy);
  EXPECT_EQ(ValidateExperimentPair(b, b).mismatches,
            std::vector<std::string>{"evaluation_type must differ"});
}

TEST(PairValidationTest, SymmetricOnRandomPairs) {
  std::mt19937 rng(11);
  auto pick = [&](std::vector<std::string> const& v) {
    return v[rng() % v.size()];
  };
  for (int i = 0; i < 2000; ++i) {
    ExperimentSpec a = MakeSpec(pick({"pr1", "pr2"}), EvaluationType::kBuggy);
    ExperimentSpec b = MakeSpec(pick({"pr1", "pr2"}),
                                rng() % 2 ? EvaluationType::kBuggy
                                          : EvaluationType::kCorrected);
    a.model = pick({"vgg16", "alexnet"});
    b.model = pick({"vgg16", "alexnet"});
    a.state = rng() % 2;
    b.state = rng() % 2;
    a.epochs = 1 + rng() % 2;
    b.epochs = 1 + rng() % 2;
    a.software = pick({"d1", "d2"});
    b.software = pick({"d1", "d2"});
    auto ab = ValidateExperimentPair(a, b).mismatches;
    auto ba = ValidateExperimentPair(b, a).mismatches;
    std::sort(ab.begin(), ab.end());
    std::sort(ba.begin(), ba.end());
    EXPECT_EQ(ab, ba);
  }
}

TEST(TrainFractionTest, ParseAndCeil) {
  auto f = TrainFraction::Parse("4/5");
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->CeilTimes(10), 8u);
  EXPECT_EQ(f->CeilTimes(11), 9u);
  EXPECT_EQ(f->ToString(), "4/5");
  EXPECT_FALSE(TrainFraction::Parse("0/5").has_value());
  EXPECT_FALSE(TrainFraction::Parse("5/5").has_value());
  EXPECT_FALSE(TrainFraction::Parse("0.5").has_value());
  // No overflow for large n.
  TrainFraction half{1, 2};
  EXPECT_EQ(half.CeilTimes(18446744073709551615ULL), 9223372036854775808ULL);
}

TEST(ChallengeManifestTest, RecordRoundTrip) {
  auto m = testing::SyntheticManifest("cifar10", 20, {4, 5});
  auto text = EncodeRecord(ToRecord(m));
  auto back = ManifestFromRecord(DecodeRecord(text));
  EXPECT_EQ(back, m);
  EXPECT_EQ(EncodeRecord(ToRecord(back)), text);
  EXPECT_EQ(back.ContentDigest(), m.ContentDigest());
}

TEST(ChallengeManifestTest, CountMustMatchDigests) {
  auto r = ToRecord(testing::SyntheticManifest("c", 4));
  r["item_count"] = 5;
  try {
    ManifestFromRecord(r);
    FAIL();
  } catch (Error const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidManifest);
  }
}

TEST(ChallengeManifestTest, FractionMustLeaveBothSubsets) {
  auto m = testing::SyntheticManifest("c", 3, {9, 10});
  EXPECT_THROW(Validate(m), Error);
  m.train_fraction = {1, 10};
  EXPECT_NO_THROW(Validate(m));
}

TEST(ChallengeManifestTest, DigestDependsOnContent) {
  auto a = testing::SyntheticManifest("c", 5);
  auto b = a;
  std::swap(b.item_digests[0], b.item_digests[1]);
  EXPECT_NE(a.ContentDigest(), b.ContentDigest());
}

TEST(RunMetricsTest, RecordRoundTrip) {
  RunMetrics r{3, 0.7, 0.1 + 0.2, 1.0, 0.0};
  auto back = RunFromRecord(DecodeRecord(EncodeRecord(ToRecord(r))));
  EXPECT_EQ(back, r);
  auto rec = ToRecord(r);
  rec["accuracy"] = "1.1";
  EXPECT_THROW(RunFromRecord(rec), Error);
}

TEST(ExperimentResultsTest, CompletedRunsAndShortfall) {
  auto spec = MakeSpec("pr1", EvaluationType::kBuggy, 50);
  ExperimentResults empty{spec, {}};
  EXPECT_EQ(empty.completed_runs(), 0u);
  EXPECT_TRUE(empty.shortfall());
  auto three = testing::ResultsWith(spec, {0.1, 0.2, 0.3});
  EXPECT_EQ(three.completed_runs(), 3u);
  EXPECT_TRUE(three.shortfall());
  std::vector<double> fifty(50, 0.5);
  EXPECT_FALSE(testing::ResultsWith(spec, fifty).shortfall());
}

TEST(ExperimentResultsTest, RecordRoundTrip) {
  auto r = testing::ResultsWith(MakeSpec("pr1", EvaluationType::kBuggy),
                                {0.25, 0.5, 0.75});
  auto text = EncodeRecord(ToRecord(r));
  auto back = ResultsFromRecord(DecodeRecord(text));
  EXPECT_EQ(back, r);
  EXPECT_EQ(EncodeRecord(ToRecord(back)), text);
}

TEST(ExperimentResultsTest, RejectsUnorderedRuns) {
  auto r = testing::ResultsWith(MakeSpec("pr1", EvaluationType::kBuggy),
                                {0.25, 0.5});
  std::swap(r.runs[0], r.runs[1]);
  EXPECT_THROW(ResultsFromRecord(ToRecord(r)), Error);
  auto rec = ToRecord(testing::ResultsWith(
      MakeSpec("pr1", EvaluationType::kBuggy), {0.25}));
  rec["completed_runs"] = 2;
  EXPECT_THROW(ResultsFromRecord(rec), Error);
}

}  // namespace
}  // namespace repro
