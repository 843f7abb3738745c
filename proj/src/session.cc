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

#include "repro/session.h"

#include <string>

namespace repro {

namespace {

wire::ErrorReply BadState(SessionPhase phase, wire::Message const& msg) {
  std::string where = phase == SessionPhase::kAwaitingHello ? "before HELLO"
                      : phase == SessionPhase::kTerminated
                          ? "after session termination"
                          : "in an established session";
  return {wire::codes::kBadState,
          std::string(wire::TypeName(msg)) + " not accepted " + where};
}

}  // namespace

SessionStep StepSession(SessionState const& state,
                        wire::Message const& incoming,
                        SessionBackend& backend) {
  SessionStep step{state, wire::ErrorReply{}};
  ++step.state.exchanges;

  if (state.phase == SessionPhase::kTerminated) {
    step.response = BadState(state.phase, incoming);
    return step;
  }

  if (state.phase == SessionPhase::kAwaitingHello) {
    auto const* hello = std::get_if<wire::Hello>(&incoming);
    if (hello == nullptr) {
      step.response = BadState(state.phase, incoming);
    } else if (hello->protocol_version != wire::kProtocolVersion) {
      step.response = wire::ErrorReply{
          wire::codes::kUnsupportedVersion,
          "server speaks protocol " + std::to_string(wire::kProtocolVersion)};
    } else {
      step.state.phase = SessionPhase::kEstablished;
      step.response = wire::HelloAck{hello->protocol_version};
    }
    return step;
  }

  if (auto const* reg = std::get_if<wire::Register>(&incoming)) {
    step.response = backend.OnRegister(reg->experiment);
  } else if (auto const* req = std::get_if<wire::RequestSplit>(&incoming)) {
    auto const root = backend.RootSeedOf(req->experiment_key);
    if (!root) {
      step.response = wire::ErrorReply{wire::codes::kUnknownExperiment,
                                       req->experiment_key};
    } else if (*root != req->echoed_seed) {
      backend.OnSeedMismatch(req->experiment_key);
      step.state.phase = SessionPhase::kTerminated;
      step.response = wire::ErrorReply{
          wire::codes::kSeedMismatch,
          "echoed seed " + std::to_string(req->echoed_seed) +
              " does not match the seed stored for " + req->experiment_key};
    } else {
      step.response = backend.OnRequestSplit(*req);
    }
  } else if (auto const* sub = std::get_if<wire::SubmitMetrics>(&incoming)) {
    if (!backend.RootSeedOf(sub->experiment_key)) {
      step.response = wire::ErrorReply{wire::codes::kUnknownExperiment,
                                       sub->experiment_key};
    } else {
      step.response = backend.OnSubmitMetrics(*sub);
    }
  } else {
    step.response = BadState(state.phase, incoming);
  }
  return step;
}

}  // namespace repro
