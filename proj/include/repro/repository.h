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

#ifndef REPRO_REPOSITORY_H_
#define REPRO_REPOSITORY_H_

#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "repro/core_model.h"
#include "repro/metrics_store.h"
#include "repro/seed_registry.h"
#include "repro/session.h"
#include "repro/split_engine.h"

namespace repro {

/// The central repository behind every session: seeds, challenges, splits
/// and collected metrics.
///
/// Seeds are keyed by bug identifier, so the buggy and corrected experiments
/// of one bug receive the same root seed, the same split and the same client
/// seed. The split is fixed per experiment (split sub-seed index 0); the run
/// index in a request is echoed back but does not change the indices.
class Repository : public SessionBackend {
 public:
  Repository(std::filesystem::path const& seed_journal,
             std::filesystem::path const& metrics_journal,
             std::vector<ChallengeManifest> manifests,
             std::string master_key = {});

  wire::Message OnRegister(ExperimentSpec const& spec) override;
  std::optional<std::uint64_t> RootSeedOf(std::string_view key) override;
  wire::Message OnRequestSplit(wire::RequestSplit const& req) override;
  wire::Message OnSubmitMetrics(wire::SubmitMetrics const& req) override;
  void OnSeedMismatch(std::string_view key) override;

  void set_seed_mismatch_listener(std::function<void(std::string_view)> fn) {
    on_mismatch_ = std::move(fn);
  }

  MetricsStore const& store() const { return store_; }
  SeedRegistry const& seeds() const { return seeds_; }

 private:
  struct Challenge {
    ChallengeManifest manifest;
    Digest content_digest;
  };

  SeedRegistry seeds_;
  MetricsStore store_;
  std::map<std::string, Challenge, std::less<>> challenges_;
  std::function<void(std::string_view)> on_mismatch_;

  std::mutex split_mu_;
  std::map<std::string, SplitAssignment, std::less<>> split_cache_;
};

}  // namespace repro

#endif  // REPRO_REPOSITORY_H_
