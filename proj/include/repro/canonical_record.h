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

// The canonical record encoding shared by journals, config files, corpus
// files, reports and wire payloads: one JSON object per line, keys sorted
// bytewise, no insignificant whitespace. 64-bit seeds and real numbers travel
// as decimal strings so that no consumer ever round-trips them through a
// float parser of its own.

#ifndef REPRO_CANONICAL_RECORD_H_
#define REPRO_CANONICAL_RECORD_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace repro {

using Record = nlohmann::json;

std::string EncodeRecord(Record const& record);

/// Parses one record. Throws Error(kInvalidRecord) unless the text is a
/// single JSON object.
Record DecodeRecord(std::string_view text);

std::string const& RequireString(Record const& r, std::string_view key);
std::uint64_t RequireUnsigned(Record const& r, std::string_view key);
bool RequireBool(Record const& r, std::string_view key);
Record const& RequireArray(Record const& r, std::string_view key);
Record const& RequireObject(Record const& r, std::string_view key);
/// A 64-bit unsigned value carried as a decimal string.
std::uint64_t RequireDecimalU64(Record const& r, std::string_view key);

std::string FormatU64(std::uint64_t value);
/// Strict: digits only, no sign, no leading zeros (except "0"), no overflow.
std::optional<std::uint64_t> ParseU64(std::string_view text);

/// Shortest decimal text that parses back to exactly `value`.
std::string FormatReal(double value);
/// Whole-string parse of a finite decimal real.
std::optional<double> ParseReal(std::string_view text);

/// Reads a file of newline-separated records; blank lines are skipped.
std::vector<Record> ReadRecordsFile(std::filesystem::path const& path);
void WriteRecordsFile(std::filesystem::path const& path,
                      std::vector<Record> const& records);

}  // namespace repro

#endif  // REPRO_CANONICAL_RECORD_H_
