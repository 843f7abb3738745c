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

#include "repro/synthetic_client.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "repro/canonical_record.h"
#include "repro/errors.h"
#include "repro/hashing.h"

namespace repro {

ProtocolClient::ProtocolClient(net::Endpoint const& endpoint)
    : socket_(net::Connect(endpoint)) {}

std::string ProtocolClient::CallRaw(std::string_view payload) {
  net::WriteFrame(socket_, payload);
  auto response = net::ReadFramePayload(socket_);
  if (!response) {
    throw Error(ErrorCode::kProtocolError, "server closed the connection");
  }
  return *std::move(response);
}

wire::Message ProtocolClient::Call(wire::Message const& request) {
  return wire::DecodePayload(CallRaw(wire::EncodePayload(request)));
}

template <class Reply>
Reply ProtocolClient::Expect(wire::Message const& request) {
  auto response = Call(request);
  if (auto* err = std::get_if<wire::ErrorReply>(&response)) {
    throw ServerError(err->code, err->detail);
  }
  if (auto* ok = std::get_if<Reply>(&response)) return std::move(*ok);
  throw Error(ErrorCode::kProtocolError,
              "unexpected " + std::string(wire::TypeName(response)) +
                  " in reply to " + std::string(wire::TypeName(request)));
}

template wire::HelloAck ProtocolClient::Expect<wire::HelloAck>(
    wire::Message const&);
template wire::Registered ProtocolClient::Expect<wire::Registered>(
    wire::Message const&);
template wire::Split ProtocolClient::Expect<wire::Split>(wire::Message const&);
template wire::MetricsAck ProtocolClient::Expect<wire::MetricsAck>(
    wire::Message const&);

bool ProtocolClient::ReadsEof() {
  char c;
  try {
    return !socket_.ReadExact(&c, 1);
  } catch (Error const&) {
    return true;
  }
}

std::pair<double, double> BoxMuller(double u1, double u2) {
  double const r = std::sqrt(-2.0 * std::log(u1));
  double const theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

RunMetrics SynthesizeRun(std::uint64_t client_rng_seed,
                         std::string_view artifact, std::uint64_t run_index,
                         std::uint32_t epochs, TrainerProfile const& profile) {
  auto const noise_seed = LeadingU64(Sha256()
                                         .UpdateBE64(client_rng_seed)
                                         .Update("ndif")
                                         .UpdateBE64(run_index)
                                         .Update(artifact)
                                         .Finish());
  SplitMix64 noise(noise_seed);
  auto [z0, z1] = BoxMuller(noise.NextUnit(), noise.NextUnit());
  auto [z2, z3] = BoxMuller(noise.NextUnit(), noise.NextUnit());
  std::array<double, 4> const z{z0, z1, z2, z3};

  double const shift =
      profile.epochs_effect * std::log(static_cast<double>(std::max(epochs, 1u)));
  std::array<double, 4> v{};
  for (std::size_t m = 0; m < 4; ++m) {
    double x = profile.mean[m] + shift;
    if (profile.spread != 0.0) x += profile.spread * z[m];
    v[m] = std::clamp(x, 0.0, 1.0);
  }
  return RunMetrics{run_index, v[0], v[1], v[2], v[3]};
}

ExperimentResults RunSyntheticClient(net::Endpoint const& endpoint,
                                     ExperimentSpec spec,
                                     TrainerProfile const& profile,
                                     SyntheticRunOptions const& options) {
  ProtocolClient client(endpoint);
  client.Expect<wire::HelloAck>(wire::Hello{wire::kProtocolVersion});
  auto const seeds = client.Expect<wire::Registered>(wire::Register{spec});
  spec.state = seeds.root_seed;
  auto const key = spec.Key();
  auto const echoed = options.echoed_seed_override.value_or(seeds.root_seed);

  ExperimentResults results{spec, {}};
  for (std::uint64_t run = 0; run < spec.planned_runs; ++run) {
    auto split =
        client.Expect<wire::Split>(wire::RequestSplit{key, run, echoed});
    if (options.tamper_split) options.tamper_split(split);
    if (split.run_index != run ||
        ChainChecksum(seeds.split_seed, split.train_indices) !=
            split.train_checksum ||
        ChainChecksum(seeds.split_seed, split.test_indices) !=
            split.test_checksum) {
      throw Error(ErrorCode::kIntegrityError,
                  "split for " + key + " run " + std::to_string(run) +
                      " failed checksum verification");
    }

    auto metrics = SynthesizeRun(seeds.client_rng_seed, spec.artifact, run,
                                 spec.epochs, profile);
    client.Expect<wire::MetricsAck>(wire::SubmitMetrics{
        key, run, FormatReal(metrics.accuracy), FormatReal(metrics.precision),
        FormatReal(metrics.recall), FormatReal(metrics.f1)});
    results.runs.push_back(metrics);
  }
  return results;
}

}  // namespace repro
