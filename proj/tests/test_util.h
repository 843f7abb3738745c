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

#ifndef REPRO_TESTS_TEST_UTIL_H_
#define REPRO_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "repro/core_model.h"
#include "repro/hashing.h"

namespace repro::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("repro-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(TempDir const&) = delete;
  TempDir& operator=(TempDir const&) = delete;

  std::filesystem::path const& path() const { return path_; }
  std::filesystem::path operator/(std::string const& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path Fixture(std::string const& name) {
  return std::filesystem::path(REPRO_FIXTURE_DIR) / name;
}

inline std::string ReadFile(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void WriteFile(std::filesystem::path const& path,
                      std::string const& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
}

inline ChallengeManifest SyntheticManifest(std::string id, std::uint64_t n,
                                           TrainFraction f = {1, 2}) {
  ChallengeManifest m{std::move(id), {}, f};
  for (std::uint64_t i = 0; i < n; ++i) {
    m.item_digests.push_back(Sha256Of(m.challenge_id + "/" + std::to_string(i)));
  }
  return m;
}

inline ExperimentSpec MakeSpec(std::string bug, EvaluationType eval,
                               std::uint32_t runs = 5,
                               std::string challenge = "cifar10") {
  ExperimentSpec s;
  s.bug_identifier = std::move(bug);
  s.evaluation_type = eval;
  s.model = "vgg16";
  s.challenge = std::move(challenge);
  s.artifact = s.bug_identifier + "-" + std::string(ToString(eval)) + ".whl";
  s.software = "torch-1.7";
  s.epochs = 30;
  s.planned_runs = runs;
  return s;
}

inline ExperimentResults ResultsWith(ExperimentSpec spec,
                                     std::vector<double> const& values) {
  ExperimentResults r{std::move(spec), {}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    r.runs.push_back(RunMetrics{i, v, v, v, v});
  }
  return r;
}

}  // namespace repro::testing

#endif  // REPRO_TESTS_TEST_UTIL_H_
