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

#include <gtest/gtest.h>

#include <filesystem>

#include "repro/errors.h"
#include "test_util.h"

namespace repro {
namespace {

using testing::ReadFile;
using testing::TempDir;
using testing::WriteFile;

TEST(JournalLineTest, PayloadThenCrc) {
  EXPECT_EQ(FormatJournalLine("hello"), "hello|3610a686\n");
}

TEST(JournalTest, MissingFileScansEmpty) {
  TempDir dir;
  auto scan = ScanJournal(dir / "none.journal");
  EXPECT_TRUE(scan.payloads.empty());
  EXPECT_FALSE(scan.torn_tail);
}

TEST(JournalTest, AppendThenReopen) {
  TempDir dir;
  auto path = dir / "j.journal";
  {
    Journal j(path);
    EXPECT_TRUE(j.loaded().empty());
    j.Append("{\"a\":1}");
    j.Append("{\"a\":2}");
  }
  EXPECT_EQ(ReadFile(path), FormatJournalLine("{\"a\":1}") +
                                FormatJournalLine("{\"a\":2}"));
  Journal again(path);
  EXPECT_EQ(again.loaded(),
            (std::vector<std::string>{"{\"a\":1}", "{\"a\":2}"}));
}

TEST(JournalTest, PayloadMayContainSeparator) {
  TempDir dir;
  auto path = dir / "j.journal";
  { Journal(path).Append("a|b"); }
  EXPECT_EQ(Journal(path).loaded(), std::vector<std::string>{"a|b"});
}

TEST(JournalTest, TornTailAtEveryByteIsDropped) {
  TempDir dir;
  auto full = FormatJournalLine("first") + FormatJournalLine("second");
  auto const first_len = FormatJournalLine("first").size();
  for (std::size_t cut = first_len; cut < full.size(); ++cut) {
    auto path = dir / ("t" + std::to_string(cut));
    WriteFile(path, full.substr(0, cut));
    auto scan = ScanJournal(path);
    EXPECT_EQ(scan.payloads, std::vector<std::string>{"first"}) << cut;
    EXPECT_EQ(scan.torn_tail, cut != first_len) << cut;
    EXPECT_EQ(scan.committed_bytes, first_len);

    // Opening for append truncates the torn tail and keeps going.
    {
      Journal j(path);
      j.Append("third");
    }
    EXPECT_EQ(ReadFile(path),
              FormatJournalLine("first") + FormatJournalLine("third"));
  }
}

TEST(JournalTest, CorruptInteriorLineIsFatal) {
  TempDir dir;
  auto path = dir / "bad.journal";
  auto good = FormatJournalLine("one");
  auto bad = FormatJournalLine("two");
  bad[0] = 'T';  // CRC no longer matches.
  WriteFile(path, good + bad + FormatJournalLine("three"));
  try {
    ScanJournal(path);
    FAIL();
  } catch (CorruptJournalError const& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCorruptJournal);
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(Journal{path}, CorruptJournalError);
}

TEST(JournalTest, CorruptFinalCompleteLineIsFatal) {
  TempDir dir;
  auto path = dir / "bad.journal";
  WriteFile(path, "one|zzzzzzzz\n");
  EXPECT_THROW(ScanJournal(path), CorruptJournalError);
  WriteFile(path, "no separator\n");
  EXPECT_THROW(ScanJournal(path), CorruptJournalError);
}

}  // namespace
}  // namespace repro
