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

#include "repro/errors.h"

#include <utility>

namespace repro {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kInvalidRecord:
      return "InvalidRecord";
    case ErrorCode::kInvalidKey:
      return "InvalidKey";
    case ErrorCode::kInvalidPurpose:
      return "InvalidPurpose";
    case ErrorCode::kStorageError:
      return "StorageError";
    case ErrorCode::kCorruptJournal:
      return "CorruptJournal";
    case ErrorCode::kInvalidManifest:
      return "InvalidManifest";
    case ErrorCode::kChallengeTooSmall:
      return "ChallengeTooSmall";
    case ErrorCode::kFrameTooLarge:
      return "FrameTooLarge";
    case ErrorCode::kProtocolError:
      return "ProtocolError";
    case ErrorCode::kUnknownMessage:
      return "UnknownMessage";
    case ErrorCode::kUnknownExperiment:
      return "UnknownExperiment";
    case ErrorCode::kIntegrityError:
      return "IntegrityError";
    case ErrorCode::kServerError:
      return "ServerError";
    case ErrorCode::kInvalidConfusion:
      return "InvalidConfusion";
    case ErrorCode::kInvalidSample:
      return "InvalidSample";
    case ErrorCode::kExactUnavailable:
      return "ExactUnavailable";
    case ErrorCode::kInsufficientData:
      return "InsufficientData";
    case ErrorCode::kPairMismatch:
      return "PairMismatch";
    case ErrorCode::kInvalidFormat:
      return "InvalidFormat";
    case ErrorCode::kNetworkError:
      return "NetworkError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string const& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

CorruptJournalError::CorruptJournalError(std::size_t line,
                                         std::string const& detail)
    : Error(ErrorCode::kCorruptJournal,
            "line " + std::to_string(line) + ": " + detail),
      line_(line) {}

ServerError::ServerError(std::string server_code, std::string const& detail)
    : Error(ErrorCode::kServerError, server_code + " (" + detail + ")"),
      server_code_(std::move(server_code)) {}

}  // namespace repro
