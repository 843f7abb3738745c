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

#ifndef REPRO_ERRORS_H_
#define REPRO_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace repro {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidRecord,
  kInvalidKey,
  kInvalidPurpose,
  kStorageError,
  kCorruptJournal,
  kInvalidManifest,
  kChallengeTooSmall,
  kFrameTooLarge,
  kProtocolError,
  kUnknownMessage,
  kUnknownExperiment,
  kIntegrityError,
  kServerError,
  kInvalidConfusion,
  kInvalidSample,
  kExactUnavailable,
  kInsufficientData,
  kPairMismatch,
  kInvalidFormat,
  kNetworkError,
};

std::string_view ErrorCodeName(ErrorCode code);

/// Base exception for every failure raised by the library. The code is the
/// stable, machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string const& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A journal line failed its checksum or could not be parsed. `line()` is
/// 1-based and names the first bad line in the file.
class CorruptJournalError : public Error {
 public:
  CorruptJournalError(std::size_t line, std::string const& detail);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The server answered with an ERROR frame.
class ServerError : public Error {
 public:
  ServerError(std::string server_code, std::string const& detail);

  std::string const& server_code() const noexcept { return server_code_; }

 private:
  std::string server_code_;
};

}  // namespace repro

#endif  // REPRO_ERRORS_H_
