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

#include "repro/journal.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

#include "repro/errors.h"
#include "repro/hashing.h"

namespace repro {

namespace {

std::string CrcHex(std::string_view payload) {
  char buf[9];
  std::snprintf(buf, sizeof(buf), "%08x", Crc32(payload));
  return std::string(buf, 8);
}

[[noreturn]] void ThrowStorage(std::string const& what,
                               std::filesystem::path const& path) {
  throw Error(ErrorCode::kStorageError,
              what + " " + path.string() + ": " + std::strerror(errno));
}

}  // namespace

std::string FormatJournalLine(std::string_view payload) {
  if (payload.find('\n') != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "journal payload contains newline");
  }
  std::string line;
  line.reserve(payload.size() + 10);
  line.append(payload);
  line.push_back('|');
  line.append(CrcHex(payload));
  line.push_back('\n');
  return line;
}

JournalScan ScanJournal(std::filesystem::path const& path) {
  JournalScan scan;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) return scan;
    throw Error(ErrorCode::kStorageError, "cannot read " + path.string());
  }
  std::string const data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  std::size_t line_number = 0;
  while (pos < data.size()) {
    auto const nl = data.find('\n', pos);
    if (nl == std::string::npos) {
      scan.torn_tail = true;
      break;
    }
    ++line_number;
    std::string_view line(data.data() + pos, nl - pos);
    auto const bar = line.rfind('|');
    if (bar == std::string_view::npos || line.size() - bar != 9) {
      throw CorruptJournalError(line_number, "missing checksum field");
    }
    auto const payload = line.substr(0, bar);
    if (line.substr(bar + 1) != CrcHex(payload)) {
      throw CorruptJournalError(line_number, "checksum mismatch");
    }
    scan.payloads.emplace_back(payload);
    pos = nl + 1;
    scan.committed_bytes = pos;
  }
  return scan;
}

Journal::Journal(std::filesystem::path path) : path_(std::move(path)) {
  auto scan = ScanJournal(path_);
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) ThrowStorage("cannot open journal", path_);
  if (scan.torn_tail) {
    if (::ftruncate(fd_, static_cast<off_t>(scan.committed_bytes)) != 0 ||
        ::fdatasync(fd_) != 0) {
      auto saved = errno;
      ::close(fd_);
      errno = saved;
      ThrowStorage("cannot drop torn tail of", path_);
    }
  }
  size_ = scan.committed_bytes;
  loaded_ = std::move(scan.payloads);
}

Journal::~Journal() {
  if (fd_ >= 0) ::close(fd_);
}

void Journal::RollBack() {
  // Best effort: the original failure is what gets reported.
  if (::ftruncate(fd_, static_cast<off_t>(size_)) != 0) return;
}

void Journal::Append(std::string_view payload) {
  auto const line = FormatJournalLine(payload);
  std::lock_guard<std::mutex> lk(mu_);
  std::size_t written = 0;
  while (written < line.size()) {
    auto n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      auto saved = errno;
      RollBack();
      errno = saved;
      ThrowStorage("append failed for", path_);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fdatasync(fd_) != 0) {
    auto saved = errno;
    RollBack();
    errno = saved;
    ThrowStorage("sync failed for", path_);
  }
  size_ += line.size();
}

}  // namespace repro
