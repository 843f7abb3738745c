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

#ifndef REPRO_JOURNAL_H_
#define REPRO_JOURNAL_H_

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace repro {

/// "<payload>|<crc32 of payload, 8 lowercase hex>\n"
std::string FormatJournalLine(std::string_view payload);

struct JournalScan {
  std::vector<std::string> payloads;
  /// Byte length of the newline-terminated prefix that verified.
  std::uint64_t committed_bytes = 0;
  /// Trailing bytes without a terminating newline were found (and ignored).
  bool torn_tail = false;
};

/// Reads every committed line of a journal without modifying the file.
///
/// A line counts as committed once its newline is on disk. An unterminated
/// final line is the signature of an interrupted append and is skipped. A
/// terminated line whose checksum does not verify throws
/// CorruptJournalError naming that line. A missing file scans as empty.
JournalScan ScanJournal(std::filesystem::path const& path);

/// Append-only line journal with a durability barrier on every append.
///
/// Opening truncates a torn tail left by a crash so that later appends start
/// on a fresh line; committed lines are never rewritten. Appends from
/// multiple threads are serialized.
class Journal {
 public:
  explicit Journal(std::filesystem::path path);
  ~Journal();

  Journal(Journal const&) = delete;
  Journal& operator=(Journal const&) = delete;

  /// Payloads that were committed when the journal was opened.
  std::vector<std::string> const& loaded() const { return loaded_; }
  std::filesystem::path const& path() const { return path_; }

  /// Writes one line and flushes it to stable storage before returning.
  /// Throws Error(kStorageError) on failure, leaving the file as it was.
  void Append(std::string_view payload);

 private:
  void RollBack();

  std::filesystem::path path_;
  int fd_ = -1;
  std::uint64_t size_ = 0;
  std::vector<std::string> loaded_;
  std::mutex mu_;
};

}  // namespace repro

#endif  // REPRO_JOURNAL_H_
