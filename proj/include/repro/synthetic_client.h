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

#ifndef REPRO_SYNTHETIC_CLIENT_H_
#define REPRO_SYNTHETIC_CLIENT_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "repro/core_model.h"
#include "repro/net.h"
#include "repro/split_engine.h"
#include "repro/wire_protocol.h"

namespace repro {

/// Blocking request/response client for one connection.
class ProtocolClient {
 public:
  explicit ProtocolClient(net::Endpoint const& endpoint);

  /// Sends one message and returns the decoded response.
  wire::Message Call(wire::Message const& request);
  /// Same exchange on raw payload bytes; the response payload is returned
  /// exactly as received.
  std::string CallRaw(std::string_view payload);
  /// Throws ServerError on an ERROR reply and Error(kProtocolError) on any
  /// other unexpected response type.
  template <class Reply>
  Reply Expect(wire::Message const& request);

  /// True once the server has closed the connection.
  bool ReadsEof();
  void Close() { socket_ = net::Socket(); }

 private:
  net::Socket socket_;
};

/// Parameters of the synthetic trainer.
struct TrainerProfile {
  /// Per-metric mean, in kAllMetrics order.
  std::array<double, 4> mean{0.7, 0.7, 0.7, 0.7};
  /// Standard deviation of the per-run perturbation.
  double spread = 0.0;
  /// Shift added per unit of ln(epochs); zero leaves the mean untouched.
  double epochs_effect = 0.0;

  static TrainerProfile Uniform(double mean, double spread) {
    return TrainerProfile{{mean, mean, mean, mean}, spread, 0.0};
  }
};

/// Standard normal pair from two uniforms in (0,1] (Box-Muller).
std::pair<double, double> BoxMuller(double u1, double u2);

/// Deterministic stand-in for one training run.
///
/// The run's random stream is reset to `client_rng_seed` at the start of
/// every run, so a fully controlled trainer would repeat itself exactly.
/// Real training keeps some non-determinism that seeding does not remove
/// (threading, kernels, the framework build itself); it is modelled as a
/// second SplitMix64 stream keyed by the seed, the run index and the
/// artifact:
///
///   noise_seed = first 8 bytes of
///       SHA-256(BE64(client_rng_seed) || "ndif" || BE64(run_index) || artifact)
///   metric_m = clamp(mean_m + epochs_effect * ln(epochs) + spread * z_m, 0, 1)
///
/// with z_m standard normals from Box-Muller over (output + 1) / 2^64.
RunMetrics SynthesizeRun(std::uint64_t client_rng_seed,
                         std::string_view artifact, std::uint64_t run_index,
                         std::uint32_t epochs, TrainerProfile const& profile);

struct SyntheticRunOptions {
  /// Test hook: mutate a received split before it is verified.
  std::function<void(wire::Split&)> tamper_split;
  /// Test hook: echo this seed instead of the registered root seed.
  std::optional<std::uint64_t> echoed_seed_override;
};

/// Runs one complete experiment against a live server: HELLO, REGISTER,
/// then for each planned run: request the split, verify both chain
/// checksums, synthesize metrics and submit them. Returns the client-side
/// record (spec.state holds the server-assigned root seed).
///
/// Throws Error(kIntegrityError) on a checksum mismatch and ServerError on
/// any ERROR reply.
ExperimentResults RunSyntheticClient(net::Endpoint const& endpoint,
                                     ExperimentSpec spec,
                                     TrainerProfile const& profile,
                                     SyntheticRunOptions const& options = {});

}  // namespace repro

#endif  // REPRO_SYNTHETIC_CLIENT_H_
