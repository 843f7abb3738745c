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

// Frame layout (the compatibility contract for third-party clients):
//
//   +----------------------+-------------------------------------------+
//   | length: u32, big-end | payload: `length` bytes, canonical record |
//   +----------------------+-------------------------------------------+
//
// The payload is a key-sorted JSON object without insignificant whitespace
// carrying a "type" field. Seeds are decimal strings, digests 64-char
// lowercase hex, metric values decimal strings.

#ifndef REPRO_WIRE_PROTOCOL_H_
#define REPRO_WIRE_PROTOCOL_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "repro/core_model.h"
#include "repro/hashing.h"

namespace repro::wire {

inline constexpr std::uint64_t kProtocolVersion = 1;
inline constexpr std::uint32_t kMaxPayloadBytes = 16u * 1024 * 1024;
inline constexpr std::size_t kHeaderBytes = 4;

struct Hello {
  std::uint64_t protocol_version = kProtocolVersion;
  friend bool operator==(Hello const&, Hello const&) = default;
};

struct HelloAck {
  std::uint64_t protocol_version = kProtocolVersion;
  friend bool operator==(HelloAck const&, HelloAck const&) = default;
};

struct Register {
  ExperimentSpec experiment;
  friend bool operator==(Register const&, Register const&) = default;
};

struct Registered {
  std::uint64_t root_seed = 0;
  std::uint64_t split_seed = 0;
  std::uint64_t client_rng_seed = 0;
  friend bool operator==(Registered const&, Registered const&) = default;
};

struct RequestSplit {
  std::string experiment_key;
  std::uint64_t run_index = 0;
  std::uint64_t echoed_seed = 0;
  friend bool operator==(RequestSplit const&, RequestSplit const&) = default;
};

struct Split {
  std::uint64_t run_index = 0;
  std::vector<std::uint64_t> train_indices;
  std::vector<std::uint64_t> test_indices;
  Digest train_checksum{};
  Digest test_checksum{};
  Digest manifest_digest{};
  friend bool operator==(Split const&, Split const&) = default;
};

/// Metric values stay as the exact decimal text the client sent.
struct SubmitMetrics {
  std::string experiment_key;
  std::uint64_t run_index = 0;
  std::string accuracy;
  std::string precision;
  std::string recall;
  std::string f1;
  friend bool operator==(SubmitMetrics const&, SubmitMetrics const&) = default;
};

struct MetricsAck {
  std::uint64_t run_index = 0;
  friend bool operator==(MetricsAck const&, MetricsAck const&) = default;
};

struct ErrorReply {
  std::string code;
  std::string detail;
  friend bool operator==(ErrorReply const&, ErrorReply const&) = default;
};

using Message = std::variant<Hello, HelloAck, Register, Registered,
                             RequestSplit, Split, SubmitMetrics, MetricsAck,
                             ErrorReply>;

/// Server-side error codes carried in ErrorReply::code.
namespace codes {
inline constexpr char kBadState[] = "BAD_STATE";
inline constexpr char kSeedMismatch[] = "SEED_MISMATCH";
inline constexpr char kUnknownExperiment[] = "UNKNOWN_EXPERIMENT";
inline constexpr char kDuplicateRun[] = "DUPLICATE_RUN";
inline constexpr char kInvalidMetrics[] = "INVALID_METRICS";
inline constexpr char kInvalidRun[] = "INVALID_RUN";
inline constexpr char kInvalidSpec[] = "INVALID_SPEC";
inline constexpr char kUnknownChallenge[] = "UNKNOWN_CHALLENGE";
inline constexpr char kSpecConflict[] = "SPEC_CONFLICT";
inline constexpr char kUnsupportedVersion[] = "UNSUPPORTED_VERSION";
inline constexpr char kProtocolError[] = "PROTOCOL_ERROR";
inline constexpr char kInternal[] = "INTERNAL";
}  // namespace codes

std::string_view TypeName(Message const& msg);

/// Canonical payload bytes (no length prefix).
std::string EncodePayload(Message const& msg);
/// Throws Error(kProtocolError) for a malformed or untyped payload and
/// Error(kUnknownMessage) for an unrecognised "type".
Message DecodePayload(std::string_view payload);

std::array<std::uint8_t, kHeaderBytes> EncodeHeader(std::uint32_t length);
/// Throws Error(kFrameTooLarge) when the declared length exceeds the bound.
std::uint32_t DecodeHeader(std::span<std::uint8_t const, kHeaderBytes> header);

std::string FrameFromPayload(std::string_view payload);
std::string EncodeFrame(Message const& msg);
/// Decodes exactly one frame. Truncated input or trailing bytes are a
/// ProtocolError; an oversize declared length is reported before the
/// payload is examined.
Message DecodeFrame(std::string_view bytes);

}  // namespace repro::wire

#endif  // REPRO_WIRE_PROTOCOL_H_
