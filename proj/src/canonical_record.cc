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

#include "repro/canonical_record.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "repro/errors.h"

namespace repro {

namespace {

[[noreturn]] void Missing(std::string_view key, std::string_view what) {
  throw Error(ErrorCode::kInvalidRecord,
              "field '" + std::string(key) + "' must be " + std::string(what));
}

Record const* Find(Record const& r, std::string_view key) {
  if (!r.is_object()) return nullptr;
  auto it = r.find(std::string(key));
  if (it == r.end()) return nullptr;
  return &*it;
}

}  // namespace

std::string EncodeRecord(Record const& record) {
  try {
    return record.dump(-1, ' ', false, Record::error_handler_t::strict);
  } catch (nlohmann::json::exception const& e) {
    throw Error(ErrorCode::kInvalidRecord, e.what());
  }
}

Record DecodeRecord(std::string_view text) {
  Record r;
  try {
    r = Record::parse(text.begin(), text.end());
  } catch (nlohmann::json::exception const& e) {
    throw Error(ErrorCode::kInvalidRecord, e.what());
  }
  if (!r.is_object()) {
    throw Error(ErrorCode::kInvalidRecord, "record is not an object");
  }
  return r;
}

std::string const& RequireString(Record const& r, std::string_view key) {
  auto const* v = Find(r, key);
  if (v == nullptr || !v->is_string()) Missing(key, "a string");
  return v->get_ref<std::string const&>();
}

std::uint64_t RequireUnsigned(Record const& r, std::string_view key) {
  auto const* v = Find(r, key);
  if (v == nullptr) Missing(key, "a non-negative integer");
  if (v->is_number_unsigned()) return v->get<std::uint64_t>();
  if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v->get<std::int64_t>());
  }
  Missing(key, "a non-negative integer");
}

bool RequireBool(Record const& r, std::string_view key) {
  auto const* v = Find(r, key);
  if (v == nullptr || !v->is_boolean()) Missing(key, "a boolean");
  return v->get<bool>();
}

Record const& RequireArray(Record const& r, std::string_view key) {
  auto const* v = Find(r, key);
  if (v == nullptr || !v->is_array()) Missing(key, "an array");
  return *v;
}

Record const& RequireObject(Record const& r, std::string_view key) {
  auto const* v = Find(r, key);
  if (v == nullptr || !v->is_object()) Missing(key, "an object");
  return *v;
}

std::uint64_t RequireDecimalU64(Record const& r, std::string_view key) {
  auto parsed = ParseU64(RequireString(r, key));
  if (!parsed) Missing(key, "an unsigned 64-bit decimal string");
  return *parsed;
}

std::string FormatU64(std::uint64_t value) { return std::to_string(value); }

std::optional<std::uint64_t> ParseU64(std::string_view text) {
  if (text.empty() || (text.size() > 1 && text[0] == '0')) return std::nullopt;
  std::uint64_t value = 0;
  auto const* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string FormatReal(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error(ErrorCode::kInvalidArgument, "real");
  return std::string(buf, ptr);
}

std::optional<double> ParseReal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0;
  auto const* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::vector<Record> ReadRecordsFile(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kStorageError, "cannot open " + path.string());
  }
  std::vector<Record> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(DecodeRecord(line));
    } catch (Error const& e) {
      throw Error(ErrorCode::kInvalidRecord, path.string() + ":" +
                                                 std::to_string(number) +
                                                 ": " + e.what());
    }
  }
  return out;
}

void WriteRecordsFile(std::filesystem::path const& path,
                      std::vector<Record> const& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kStorageError, "cannot write " + path.string());
  }
  for (auto const& r : records) out << EncodeRecord(r) << '\n';
  if (!out) {
    throw Error(ErrorCode::kStorageError, "write failed: " + path.string());
  }
}

}  // namespace repro
