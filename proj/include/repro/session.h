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

#ifndef REPRO_SESSION_H_
#define REPRO_SESSION_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "repro/wire_protocol.h"

namespace repro {

enum class SessionPhase { kAwaitingHello, kEstablished, kTerminated };

struct SessionState {
  SessionPhase phase = SessionPhase::kAwaitingHello;
  /// Requests answered so far, including errors.
  std::uint64_t exchanges = 0;

  friend bool operator==(SessionState const&, SessionState const&) = default;
};

/// What a session needs from the central repository. Each handler returns
/// the response message, which is either the success reply or an
/// ErrorReply.
class SessionBackend {
 public:
  virtual ~SessionBackend() = default;

  /// REGISTERED or ERROR.
  virtual wire::Message OnRegister(ExperimentSpec const& spec) = 0;
  /// Root seed of a registered experiment; nullopt when unknown.
  virtual std::optional<std::uint64_t> RootSeedOf(std::string_view key) = 0;
  /// SPLIT or ERROR. Called only after the echoed seed has been verified.
  virtual wire::Message OnRequestSplit(wire::RequestSplit const& req) = 0;
  /// METRICS_ACK or ERROR.
  virtual wire::Message OnSubmitMetrics(wire::SubmitMetrics const& req) = 0;
  virtual void OnSeedMismatch(std::string_view /*key*/) {}
};

struct SessionStep {
  SessionState state;
  wire::Message response;
};

/// The per-connection protocol machine. HELLO must come first; REQUEST_SPLIT
/// and SUBMIT_METRICS require an experiment known to the backend (registered
/// in this or an earlier session). A REQUEST_SPLIT whose echoed seed differs
/// from the stored root seed yields SEED_MISMATCH and terminates the
/// session. A terminated session answers everything with BAD_STATE.
SessionStep StepSession(SessionState const& state,
                        wire::Message const& incoming,
                        SessionBackend& backend);

}  // namespace repro

#endif  // REPRO_SESSION_H_
