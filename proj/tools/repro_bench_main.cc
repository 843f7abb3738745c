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

// repro-bench: experiment server, synthetic client and study tooling.
//
// Exit codes: 0 success, 2 validation failure, 3 insufficient data,
// 1 anything else (including a server halted by a seed mismatch).

#include <signal.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "repro/canonical_record.h"
#include "repro/core_model.h"
#include "repro/errors.h"
#include "repro/hashing.h"
#include "repro/metrics_store.h"
#include "repro/server.h"
#include "repro/stats.h"
#include "repro/study.h"
#include "repro/synthetic_client.h"

namespace {

using namespace repro;

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInsufficient = 3;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInsufficientData:
      return kExitInsufficient;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidRecord:
    case ErrorCode::kInvalidKey:
    case ErrorCode::kInvalidPurpose:
    case ErrorCode::kInvalidManifest:
    case ErrorCode::kInvalidConfusion:
    case ErrorCode::kInvalidSample:
    case ErrorCode::kPairMismatch:
    case ErrorCode::kInvalidFormat:
    case ErrorCode::kUnknownExperiment:
    case ErrorCode::kChallengeTooSmall:
      return kExitValidation;
    default:
      return kExitOther;
  }
}

// Where experiment results come from: a metrics journal, directly or via
// the server config that names it.
struct JournalSource {
  std::string journal;
  std::string config;

  void AddTo(CLI::App* cmd) {
    auto* j = cmd->add_option("--journal", journal, "Metrics journal");
    auto* c = cmd->add_option("--config", config, "Server config record");
    j->excludes(c);
  }

  ResultsByKey Load() const {
    if (!journal.empty()) return LoadMetricsJournal(journal);
    if (!config.empty()) {
      return LoadMetricsJournal(LoadServerConfig(config).metrics_journal);
    }
    throw Error(ErrorCode::kInvalidArgument, "--journal or --config required");
  }
};

ExperimentResults const& Lookup(ResultsByKey const& all,
                                std::string const& key) {
  auto it = all.find(key);
  if (it == all.end()) {
    throw Error(ErrorCode::kUnknownExperiment, "no experiment '" + key + "'");
  }
  return it->second;
}

void WriteOutput(std::string const& path, std::string const& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  if (!out.flush()) {
    throw Error(ErrorCode::kStorageError, "cannot write " + path);
  }
}

// --- server -------------------------------------------------------------

int RunServer(std::string const& config_path) {
  auto config = LoadServerConfig(config_path);

  // Block the stop signals before any thread exists; they are collected
  // synchronously below.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  Server server(std::move(config));
  std::cout << "listening on " << server.endpoint().ToString() << std::endl;
  server.Start();
  timespec const tick{0, 200'000'000};
  while (!server.halted()) {
    if (sigtimedwait(&stop_signals, nullptr, &tick) > 0) break;
  }
  server.Stop();
  if (server.halted()) {
    std::cerr << "server halted after a seed mismatch" << std::endl;
    return kExitOther;
  }
  return kExitOk;
}

// --- manifest -----------------------------------------------------------

struct ManifestArgs {
  std::string id;
  std::string fraction = "1/2";
  std::uint64_t synthetic = 0;
  std::vector<std::string> files;
  std::string out;
};

int CreateManifest(ManifestArgs const& args) {
  auto fraction = TrainFraction::Parse(args.fraction);
  if (!fraction) {
    throw Error(ErrorCode::kInvalidArgument,
                "train fraction must look like 1/2");
  }
  ChallengeManifest m{args.id, {}, *fraction};
  if (args.synthetic > 0) {
    for (std::uint64_t i = 0; i < args.synthetic; ++i) {
      m.item_digests.push_back(Sha256Of(args.id + "/" + std::to_string(i)));
    }
  }
  for (auto const& path : args.files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kStorageError, "cannot read " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    m.item_digests.push_back(Sha256Of(bytes));
  }
  Validate(m);
  WriteOutput(args.out, EncodeRecord(ToRecord(m)) + "\n");
  std::cerr << "manifest " << m.challenge_id << ": " << m.item_count()
            << " items, digest " << ToHex(m.ContentDigest()) << std::endl;
  return kExitOk;
}

// --- run-synthetic ------------------------------------------------------

struct SyntheticArgs {
  std::string server = "127.0.0.1:7070";
  ExperimentSpec spec;
  std::string evaluation = "buggy";
  double mean = 0.7;
  double spread = 0.003;
  std::string out;
};

int RunSynthetic(SyntheticArgs args) {
  auto eval = ParseEvaluationType(args.evaluation);
  if (!eval) {
    throw Error(ErrorCode::kInvalidArgument,
                "evaluation must be buggy or corrected");
  }
  args.spec.evaluation_type = *eval;
  auto results =
      RunSyntheticClient(net::ParseEndpoint(args.server), args.spec,
                         TrainerProfile::Uniform(args.mean, args.spread));
  if (!args.out.empty()) {
    WriteOutput(args.out, EncodeRecord(ToRecord(results)) + "\n");
  }
  std::cout << results.spec.Key() << ": " << results.completed_runs()
            << " runs submitted, root seed " << results.spec.state
            << std::endl;
  return kExitOk;
}

// --- corpus filter ------------------------------------------------------

int FilterCorpusCommand(std::string const& in, std::string const& out) {
  auto outcome = FilterCorpus(LoadCorpus(in));
  std::size_t rejected = 0;
  for (auto const& [code, bugs] : outcome.rejected) {
    std::cout << "rejected " << ToString(code) << ": " << bugs.size() << "\n";
    rejected += bugs.size();
  }
  std::cout << "accepted: " << outcome.accepted.size() << "\n";
  for (auto const& bug : outcome.accepted) {
    std::cout << "  " << bug.bug_id
              << (bug.favour_tags.empty() ? "" : "  (favoured)") << "\n";
  }
  std::cout << "total: " << outcome.accepted.size() + rejected << std::endl;
  if (!out.empty()) {
    std::vector<Record> records;
    for (auto const& bug : outcome.accepted) records.push_back(ToRecord(bug));
    WriteRecordsFile(out, records);
  }
  return kExitOk;
}

// --- compare ------------------------------------------------------------

struct CompareArgs {
  JournalSource source;
  std::string buggy;
  std::string corrected;
  double alpha = 0.05;
  std::string format = "text-table";
  bool allow_mismatch = false;
};

int Compare(CompareArgs const& args) {
  auto format = ParseReportFormat(args.format);
  auto all = args.source.Load();
  ExperimentPair pair{Lookup(all, args.buggy), Lookup(all, args.corrected),
                      args.allow_mismatch};
  auto cmp = CompareExperiments(pair.buggy, pair.corrected, args.alpha,
                                args.allow_mismatch);
  for (auto const& m : cmp.overridden_mismatches) {
    std::cerr << "warning: pair mismatch overridden: " << m << "\n";
  }
  std::array<double, 4> p{};
  for (std::size_t i = 0; i < 4; ++i) p[i] = cmp.tests[i].p_value;
  ComparisonReport report{args.alpha,
                          {MakeReportRow(pair.buggy.spec.bug_identifier, p,
                                         cmp.dagger, args.alpha)}};
  std::cout << RenderReport(report, format);
  if (format == ReportFormat::kTextTable) {
    std::cout << "\n" << cmp.k << " runs per side (buggy "
              << cmp.buggy_completed << "/" << pair.buggy.spec.planned_runs
              << ", corrected " << cmp.corrected_completed << "/"
              << pair.corrected.spec.planned_runs << "), method "
              << ToString(cmp.tests[0].method) << ", alpha "
              << FormatReal(args.alpha) << std::endl;
  }
  return kExitOk;
}

// --- report -------------------------------------------------------------

struct ReportArgs {
  JournalSource source;
  std::string pairs;
  std::string rows;
  double alpha = 0.05;
  std::string format;
  std::string out;
};

std::string DefaultFormat(std::string const& out) {
  if (out.ends_with(".csv")) return "csv";
  if (out.ends_with(".records")) return "records";
  return "text-table";
}

int Report(ReportArgs const& args) {
  auto format =
      ParseReportFormat(args.format.empty() ? DefaultFormat(args.out)
                                            : args.format);
  ComparisonReport report;
  if (!args.rows.empty()) {
    report = ReportFromRecords(ReadRecordsFile(args.rows), args.alpha);
  } else {
    auto all = args.source.Load();
    std::vector<ExperimentPair> pairs;
    for (auto const& r : ReadRecordsFile(args.pairs)) {
      bool const allow =
          r.contains("allow_mismatch") && RequireBool(r, "allow_mismatch");
      pairs.push_back(ExperimentPair{Lookup(all, RequireString(r, "buggy")),
                                     Lookup(all, RequireString(r, "corrected")),
                                     allow});
    }
    report = BuildReport(pairs, args.alpha);
  }
  WriteOutput(args.out, RenderReport(report, format));
  return kExitOk;
}

// --- summary ------------------------------------------------------------

struct SummaryArgs {
  JournalSource source;
  std::string key;
  bool all = false;
  std::string format = "text";
};

std::string Optional(std::optional<double> v) {
  return v ? FormatReal(*v) : "";
}

int Summary(SummaryArgs const& args) {
  if (args.format != "text" && args.format != "csv") {
    throw Error(ErrorCode::kInvalidFormat, "summary format is text or csv");
  }
  auto all = args.source.Load();
  std::vector<std::string> keys;
  if (args.all) {
    for (auto const& [key, _] : all) keys.push_back(key);
  } else {
    Lookup(all, args.key);
    keys.push_back(args.key);
  }

  std::ostringstream out;
  if (args.format == "csv") out << "experiment,metric,count,mean,std,min,max\n";
  for (auto const& key : keys) {
    auto const& results = all.at(key);
    if (args.all && results.runs.empty()) continue;
    auto const d = Descriptive(results);
    if (args.format == "text") {
      out << key << " (" << results.completed_runs() << "/"
          << results.spec.planned_runs << " runs)\n";
    }
    for (auto m : kAllMetrics) {
      auto const& s = d.Get(m);
      if (args.format == "csv") {
        out << key << "," << ToString(m) << "," << s.count << ","
            << FormatReal(s.mean) << "," << Optional(s.stddev) << ","
            << FormatReal(s.min) << "," << FormatReal(s.max) << "\n";
      } else {
        out << "  " << ToString(m) << ": mean " << FormatReal(s.mean)
            << " std " << (s.stddev ? FormatReal(*s.stddev) : "n/a")
            << " min " << FormatReal(s.min) << " max " << FormatReal(s.max)
            << "\n";
      }
    }
  }
  std::cout << out.str();
  return kExitOk;
}

// --- export -------------------------------------------------------------

int Export(JournalSource const& source, std::string const& key) {
  auto all = source.Load();
  std::cout << EncodeRecord(ToRecord(Lookup(all, key))) << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reproducible experiment server and bug-study tooling"};
  app.require_subcommand(1);
  int status = kExitOk;
  std::function<int()> action;

  std::string config_path;
  auto* server = app.add_subcommand("server", "Run the experiment server");
  server->add_option("--config", config_path, "Server config record")
      ->required();
  server->callback([&] { action = [&] { return RunServer(config_path); }; });

  ManifestArgs manifest;
  auto* mf = app.add_subcommand("manifest", "Create a challenge manifest");
  mf->add_option("--id", manifest.id, "Challenge id")->required();
  mf->add_option("--train-fraction", manifest.fraction, "n/d");
  mf->add_option("--synthetic", manifest.synthetic,
                 "Generate this many synthetic items");
  mf->add_option("files", manifest.files, "Item files");
  mf->add_option("--out", manifest.out, "Output path (default stdout)");
  mf->callback([&] { action = [&] { return CreateManifest(manifest); }; });

  SyntheticArgs synth;
  auto* rs = app.add_subcommand("run-synthetic",
                                "Run an experiment with the synthetic trainer");
  rs->add_option("--server", synth.server, "host:port");
  rs->add_option("--bug", synth.spec.bug_identifier, "Bug identifier")
      ->required();
  rs->add_option("--evaluation", synth.evaluation, "buggy or corrected");
  rs->add_option("--model", synth.spec.model)->required();
  rs->add_option("--challenge", synth.spec.challenge)->required();
  rs->add_option("--artifact", synth.spec.artifact)->required();
  rs->add_option("--software", synth.spec.software)->required();
  synth.spec.epochs = 30;
  synth.spec.planned_runs = 50;
  rs->add_option("--epochs", synth.spec.epochs);
  rs->add_option("--runs", synth.spec.planned_runs);
  rs->add_option("--mean", synth.mean, "Mean of every metric");
  rs->add_option("--spread", synth.spread, "Per-run standard deviation");
  rs->add_option("--out", synth.out, "Write the client-side results here");
  rs->callback([&] { action = [&] { return RunSynthetic(synth); }; });

  std::string corpus_in, corpus_out;
  auto* corpus = app.add_subcommand("corpus", "Bug corpus tools");
  corpus->require_subcommand(1);
  auto* filter = corpus->add_subcommand("filter", "Apply the filtering rules");
  filter->add_option("input", corpus_in, "Corpus records")->required();
  filter->add_option("--accepted", corpus_out, "Write accepted records here");
  filter->callback(
      [&] { action = [&] { return FilterCorpusCommand(corpus_in, corpus_out); }; });

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "U-test one buggy/corrected pair");
  cmp.source.AddTo(compare);
  compare->add_option("--buggy", cmp.buggy, "Experiment key")->required();
  compare->add_option("--corrected", cmp.corrected, "Experiment key")
      ->required();
  compare->add_option("--alpha", cmp.alpha);
  compare->add_option("--format", cmp.format, "text-table, csv or records");
  compare->add_flag("--allow-mismatch", cmp.allow_mismatch,
                    "Compare even if the specs do not form a valid pair");
  compare->callback([&] { action = [&] { return Compare(cmp); }; });

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Comparison report for many pairs");
  rep.source.AddTo(report);
  auto* pairs_opt =
      report->add_option("--pairs", rep.pairs, "Pair records {buggy, corrected}");
  auto* rows_opt =
      report->add_option("--rows", rep.rows, "Precomputed p-value records");
  pairs_opt->excludes(rows_opt);
  report->add_option("--alpha", rep.alpha);
  report->add_option("--format", rep.format, "text-table, csv or records");
  report->add_option("--out", rep.out, "Output path (default stdout)");
  report->callback([&] {
    if (rep.pairs.empty() && rep.rows.empty()) {
      throw CLI::RequiredError("--pairs or --rows");
    }
    action = [&] { return Report(rep); };
  });

  SummaryArgs sum;
  auto* summary = app.add_subcommand("summary", "Descriptive statistics");
  sum.source.AddTo(summary);
  auto* key_opt = summary->add_option("key", sum.key, "Experiment key");
  auto* all_opt = summary->add_flag("--all", sum.all, "Every experiment");
  key_opt->excludes(all_opt);
  summary->add_option("--format", sum.format, "text or csv");
  summary->callback([&] {
    if (sum.key.empty() && !sum.all) throw CLI::RequiredError("key or --all");
    action = [&] { return Summary(sum); };
  });

  JournalSource export_source;
  std::string export_key;
  auto* exp = app.add_subcommand("export", "Print one experiment's results");
  export_source.AddTo(exp);
  exp->add_option("key", export_key, "Experiment key")->required();
  exp->callback([&] { action = [&] { return Export(export_source, export_key); }; });

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    status = action();
  } catch (ServerError const& e) {
    std::cerr << "error: " << e.what() << std::endl;
    status = kExitOther;
  } catch (Error const& e) {
    std::cerr << "error: " << e.what() << std::endl;
    status = ExitCodeFor(e.code());
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << std::endl;
    status = kExitOther;
  }
  return status;
}
