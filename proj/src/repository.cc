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

#include "repro/repository.h"

#include "repro/errors.h"

namespace repro {

namespace {

wire::ErrorReply Reply(char const* code, std::string detail) {
  return wire::ErrorReply{code, std::move(detail)};
}

std::string JoinMismatches(ExperimentSpec const& a, ExperimentSpec const& b) {
  std::string out;
  auto add = [&](char const* name, bool differs) {
    if (!differs) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add("model", a.model != b.model);
  add("challenge", a.challenge != b.challenge);
  add("artifact", a.artifact != b.artifact);
  add("software", a.software != b.software);
  add("epochs", a.epochs != b.epochs);
  add("planned_runs", a.planned_runs != b.planned_runs);
  return out;
}

}  // namespace

Repository::Repository(std::filesystem::path const& seed_journal,
                       std::filesystem::path const& metrics_journal,
                       std::vector<ChallengeManifest> manifests,
                       std::string master_key)
    : seeds_(seed_journal, std::move(master_key)), store_(metrics_journal) {
  for (auto& m : manifests) {
    Validate(m);
    auto digest = m.ContentDigest();
    auto id = m.challenge_id;
    if (!challenges_.emplace(id, Challenge{std::move(m), digest}).second) {
      throw Error(ErrorCode::kInvalidManifest, "duplicate challenge '" + id + "'");
    }
  }
}

wire::Message Repository::OnRegister(ExperimentSpec const& spec) {
  try {
    Validate(spec);
  } catch (Error const& e) {
    return Reply(wire::codes::kInvalidSpec, e.what());
  }
  if (!challenges_.contains(spec.challenge)) {
    return Reply(wire::codes::kUnknownChallenge, spec.challenge);
  }
  try {
    auto const key = spec.Key();
    auto record = seeds_.GetOrCreate(key, spec.bug_identifier);

    // The server is authoritative for the random state.
    auto stored = spec;
    stored.state = record.root_seed;
    if (store_.Register(stored) == MetricsStore::RegisterOutcome::kConflict) {
      return Reply(wire::codes::kSpecConflict,
                   key + " already registered with different " +
                       JoinMismatches(*store_.SpecOf(key), stored));
    }
    record = seeds_.MarkIssued(key);
    return wire::Registered{
        record.root_seed,
        DeriveSubseed(record.root_seed, SeedPurpose::kSplit, 0),
        DeriveSubseed(record.root_seed, SeedPurpose::kClientRng, 0)};
  } catch (Error const& e) {
    return Reply(wire::codes::kInternal, e.what());
  }
}

std::optional<std::uint64_t> Repository::RootSeedOf(std::string_view key) {
  auto spec = store_.SpecOf(key);
  if (!spec) return std::nullopt;
  return spec->state;
}

wire::Message Repository::OnRequestSplit(wire::RequestSplit const& req) {
  auto spec = store_.SpecOf(req.experiment_key);
  if (!spec) return Reply(wire::codes::kUnknownExperiment, req.experiment_key);
  auto const& challenge = challenges_.find(spec->challenge)->second;

  SplitAssignment split;
  {
    std::lock_guard<std::mutex> lk(split_mu_);
    auto it = split_cache_.find(req.experiment_key);
    if (it == split_cache_.end()) {
      auto const split_seed =
          DeriveSubseed(spec->state, SeedPurpose::kSplit, 0);
      try {
        it = split_cache_
                 .emplace(req.experiment_key,
                          MakeSplit(challenge.manifest, split_seed, 0))
                 .first;
      } catch (Error const& e) {
        return Reply(wire::codes::kInternal, e.what());
      }
    }
    split = it->second;
  }
  wire::Split out;
  out.run_index = req.run_index;
  out.train_indices = std::move(split.train_indices);
  out.test_indices = std::move(split.test_indices);
  out.train_checksum = split.train_checksum;
  out.test_checksum = split.test_checksum;
  out.manifest_digest = challenge.content_digest;
  return out;
}

wire::Message Repository::OnSubmitMetrics(wire::SubmitMetrics const& req) {
  using Outcome = MetricsStore::SubmitOutcome;
  Outcome outcome;
  try {
    outcome = store_.Submit(
        req.experiment_key, req.run_index,
        MetricTexts{req.accuracy, req.precision, req.recall, req.f1});
  } catch (Error const& e) {
    return Reply(wire::codes::kInternal, e.what());
  }
  auto const run = std::to_string(req.run_index);
  switch (outcome) {
    case Outcome::kAccepted:
      return wire::MetricsAck{req.run_index};
    case Outcome::kUnknownExperiment:
      return Reply(wire::codes::kUnknownExperiment, req.experiment_key);
    case Outcome::kInvalidMetrics:
      return Reply(wire::codes::kInvalidMetrics,
                   "metric values must be decimal reals in [0,1]");
    case Outcome::kInvalidRun:
      return Reply(wire::codes::kInvalidRun,
                   "run " + run + " is beyond planned_runs");
    case Outcome::kDuplicate:
      return Reply(wire::codes::kDuplicateRun,
                   "run " + run + " already stored for " + req.experiment_key);
  }
  return Reply(wire::codes::kInternal, "unhandled submit outcome");
}

void Repository::OnSeedMismatch(std::string_view key) {
  if (on_mismatch_) on_mismatch_(key);
}

}  // namespace repro
