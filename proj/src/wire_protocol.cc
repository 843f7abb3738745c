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

#include "repro/wire_protocol.h"

#include "repro/canonical_record.h"
#include "repro/errors.h"

namespace repro::wire {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Record IndexArray(std::vector<std::uint64_t> const& v) {
  Record a = Record::array();
  for (auto i : v) a.push_back(i);
  return a;
}

std::vector<std::uint64_t> RequireIndexArray(Record const& r,
                                             std::string_view key) {
  std::vector<std::uint64_t> out;
  auto const& a = RequireArray(r, key);
  out.reserve(a.size());
  for (auto const& v : a) {
    if (!v.is_number_unsigned() &&
        !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw Error(ErrorCode::kInvalidRecord,
                  "field '" + std::string(key) + "' must hold indices");
    }
    out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

Digest RequireDigest(Record const& r, std::string_view key) {
  auto d = DigestFromHex(RequireString(r, key));
  if (!d) {
    throw Error(ErrorCode::kInvalidRecord,
                "field '" + std::string(key) + "' must be a 64-char hex digest");
  }
  return *d;
}

Record ToPayloadRecord(Message const& msg) {
  return std::visit(
      Overloaded{
          [](Hello const& m) {
            return Record{{"protocol_version", m.protocol_version},
                          {"type", "HELLO"}};
          },
          [](HelloAck const& m) {
            return Record{{"protocol_version", m.protocol_version},
                          {"type", "HELLO_ACK"}};
          },
          [](Register const& m) {
            return Record{{"experiment", ToRecord(m.experiment)},
                          {"type", "REGISTER"}};
          },
          [](Registered const& m) {
            return Record{{"client_rng_seed", FormatU64(m.client_rng_seed)},
                          {"root_seed", FormatU64(m.root_seed)},
                          {"split_seed", FormatU64(m.split_seed)},
                          {"type", "REGISTERED"}};
          },
          [](RequestSplit const& m) {
            return Record{{"echoed_seed", FormatU64(m.echoed_seed)},
                          {"experiment_key", m.experiment_key},
                          {"run_index", m.run_index},
                          {"type", "REQUEST_SPLIT"}};
          },
          [](Split const& m) {
            return Record{{"manifest_digest", ToHex(m.manifest_digest)},
                          {"run_index", m.run_index},
                          {"test_checksum", ToHex(m.test_checksum)},
                          {"test_indices", IndexArray(m.test_indices)},
                          {"train_checksum", ToHex(m.train_checksum)},
                          {"train_indices", IndexArray(m.train_indices)},
                          {"type", "SPLIT"}};
          },
          [](SubmitMetrics const& m) {
            return Record{{"accuracy", m.accuracy},
                          {"experiment_key", m.experiment_key},
                          {"f1", m.f1},
                          {"precision", m.precision},
                          {"recall", m.recall},
                          {"run_index", m.run_index},
                          {"type", "SUBMIT_METRICS"}};
          },
          [](MetricsAck const& m) {
            return Record{{"run_index", m.run_index}, {"type", "METRICS_ACK"}};
          },
          [](ErrorReply const& m) {
            return Record{
                {"code", m.code}, {"detail", m.detail}, {"type", "ERROR"}};
          },
      },
      msg);
}

Message FromPayloadRecord(Record const& r, std::string const& type) {
  if (type == "HELLO") return Hello{RequireUnsigned(r, "protocol_version")};
  if (type == "HELLO_ACK") {
    return HelloAck{RequireUnsigned(r, "protocol_version")};
  }
  if (type == "REGISTER") {
    return Register{SpecFromRecord(RequireObject(r, "experiment"))};
  }
  if (type == "REGISTERED") {
    return Registered{RequireDecimalU64(r, "root_seed"),
                      RequireDecimalU64(r, "split_seed"),
                      RequireDecimalU64(r, "client_rng_seed")};
  }
  if (type == "REQUEST_SPLIT") {
    return RequestSplit{RequireString(r, "experiment_key"),
                        RequireUnsigned(r, "run_index"),
                        RequireDecimalU64(r, "echoed_seed")};
  }
  if (type == "SPLIT") {
    Split s;
    s.run_index = RequireUnsigned(r, "run_index");
    s.train_indices = RequireIndexArray(r, "train_indices");
    s.test_indices = RequireIndexArray(r, "test_indices");
    s.train_checksum = RequireDigest(r, "train_checksum");
    s.test_checksum = RequireDigest(r, "test_checksum");
    s.manifest_digest = RequireDigest(r, "manifest_digest");
    return s;
  }
  if (type == "SUBMIT_METRICS") {
    SubmitMetrics m;
    m.experiment_key = RequireString(r, "experiment_key");
    m.run_index = RequireUnsigned(r, "run_index");
    m.accuracy = RequireString(r, "accuracy");
    m.precision = RequireString(r, "precision");
    m.recall = RequireString(r, "recall");
    m.f1 = RequireString(r, "f1");
    return m;
  }
  if (type == "METRICS_ACK") return MetricsAck{RequireUnsigned(r, "run_index")};
  if (type == "ERROR") {
    return ErrorReply{RequireString(r, "code"), RequireString(r, "detail")};
  }
  throw Error(ErrorCode::kUnknownMessage, "type '" + type + "'");
}

}  // namespace

std::string_view TypeName(Message const& msg) {
  static constexpr std::string_view kNames[] = {
      "HELLO",          "HELLO_ACK",   "REGISTER",
      "REGISTERED",     "REQUEST_SPLIT", "SPLIT",
      "SUBMIT_METRICS", "METRICS_ACK", "ERROR"};
  return kNames[msg.index()];
}

std::string EncodePayload(Message const& msg) {
  return EncodeRecord(ToPayloadRecord(msg));
}

Message DecodePayload(std::string_view payload) {
  if (payload.empty()) {
    throw Error(ErrorCode::kProtocolError, "empty payload");
  }
  try {
    auto const r = DecodeRecord(payload);
    auto it = r.find("type");
    if (it == r.end() || !it->is_string()) {
      throw Error(ErrorCode::kProtocolError, "payload has no string 'type'");
    }
    return FromPayloadRecord(r, it->get<std::string>());
  } catch (Error const& e) {
    if (e.code() == ErrorCode::kUnknownMessage ||
        e.code() == ErrorCode::kProtocolError) {
      throw;
    }
    throw Error(ErrorCode::kProtocolError, e.what());
  }
}

std::array<std::uint8_t, kHeaderBytes> EncodeHeader(std::uint32_t length) {
  return {static_cast<std::uint8_t>(length >> 24),
          static_cast<std::uint8_t>(length >> 16),
          static_cast<std::uint8_t>(length >> 8),
          static_cast<std::uint8_t>(length)};
}

std::uint32_t DecodeHeader(std::span<std::uint8_t const, kHeaderBytes> header) {
  std::uint32_t const length = std::uint32_t{header[0]} << 24 |
                               std::uint32_t{header[1]} << 16 |
                               std::uint32_t{header[2]} << 8 | header[3];
  if (length > kMaxPayloadBytes) {
    throw Error(ErrorCode::kFrameTooLarge,
                "declared payload of " + std::to_string(length) + " bytes");
  }
  return length;
}

std::string FrameFromPayload(std::string_view payload) {
  if (payload.size() > kMaxPayloadBytes) {
    throw Error(ErrorCode::kFrameTooLarge,
                "payload of " + std::to_string(payload.size()) + " bytes");
  }
  auto const header = EncodeHeader(static_cast<std::uint32_t>(payload.size()));
  std::string frame(header.begin(), header.end());
  frame.append(payload);
  return frame;
}

std::string EncodeFrame(Message const& msg) {
  return FrameFromPayload(EncodePayload(msg));
}

Message DecodeFrame(std::string_view bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw Error(ErrorCode::kProtocolError, "truncated frame header");
  }
  std::array<std::uint8_t, kHeaderBytes> header{};
  for (std::size_t i = 0; i < kHeaderBytes; ++i) {
    header[i] = static_cast<std::uint8_t>(bytes[i]);
  }
  auto const length = DecodeHeader(header);
  auto const body = bytes.substr(kHeaderBytes);
  if (body.size() < length) {
    throw Error(ErrorCode::kProtocolError, "truncated frame payload");
  }
  if (body.size() > length) {
    throw Error(ErrorCode::kProtocolError, "trailing bytes after frame");
  }
  return DecodePayload(body);
}

}  // namespace repro::wire
