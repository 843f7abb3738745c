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

#ifndef REPRO_HASHING_H_
#define REPRO_HASHING_H_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace repro {

using Digest = std::array<std::uint8_t, 32>;

/// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(Sha256&&) noexcept;
  Sha256& operator=(Sha256&&) noexcept;

  Sha256& Update(std::span<std::uint8_t const> bytes);
  Sha256& Update(std::string_view bytes);
  /// Appends the 8-byte big-endian encoding of `value`.
  Sha256& UpdateBE64(std::uint64_t value);
  Digest Finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Digest Sha256Of(std::span<std::uint8_t const> bytes);
Digest Sha256Of(std::string_view bytes);

/// Big-endian interpretation of the first 8 bytes.
std::uint64_t LeadingU64(Digest const& digest);

std::array<std::uint8_t, 8> EncodeBE64(std::uint64_t value);

std::string ToHex(std::span<std::uint8_t const> bytes);
inline std::string ToHex(Digest const& d) {
  return ToHex(std::span<std::uint8_t const>(d));
}
/// Accepts exactly 64 lowercase hex characters.
std::optional<Digest> DigestFromHex(std::string_view hex);
/// Any even-length hex string (either case).
std::optional<std::string> BytesFromHex(std::string_view hex);

std::uint32_t Crc32(std::string_view bytes);

}  // namespace repro

#endif  // REPRO_HASHING_H_
