#include <gtest/gtest.h>

#include <fstream>

#include "support/test_support.hpp"
#include "wgym/common/errors.hpp"
#include "wgym/study/journal.hpp"
#include "wgym/study/runner.hpp"
#include "wgym/tasks/synthetic.hpp"

namespace wgym {
namespace {

using wgym::testing::TempDir;

Study finished_study(const std::filesystem::path& root, const std::string& id) {
  StudyOptions o;
  o.seeds_per_task = 1;
  o.id = id;
  auto s = make_study(synthetic_benchmark(), {oracle_agent_args()}, "", root, o);
  run_study(s);
  return s;
}

std::vector<std::string> lines_of(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST(Journal, TwoStudiesTwoRowsOneHeader) {
  TempDir dir;
  const auto journal = dir / "journal.csv";
  append_to_journal(finished_study(dir.path(), "s1"), journal);
  append_to_journal(finished_study(dir.path(), "s2"), journal);
  auto lines = lines_of(journal);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0].rfind("study_id,agent_name,benchmark,", 0), 0u);
  auto rows = read_journal(journal);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].study_id, "s1");
  EXPECT_EQ(rows[1].study_id, "s2");
  EXPECT_EQ(rows[0].n, 10u);
  EXPECT_EQ(rows[0].success_rate, 1.0);
  EXPECT_FALSE(rows[1].duplicate);
}

TEST(Journal, SecondAppendIsFlaggedDuplicate) {
  TempDir dir;
  const auto journal = dir / "journal.csv";
  auto s = finished_study(dir.path(), "s1");
  append_to_journal(s, journal);
  auto again = append_to_journal(s, journal);
  ASSERT_EQ(again.size(), 1u);
  EXPECT_TRUE(again[0].duplicate);
  auto rows = read_journal(journal);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_FALSE(rows[0].duplicate);
  EXPECT_TRUE(rows[1].duplicate);
}

TEST(Journal, RowsMatchStudy) {
  TempDir dir;
  auto s = finished_study(dir.path(), "s1");
  auto rows = journal_rows(s);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].benchmark, "synthetic");
  EXPECT_EQ(rows[0].commit_hash, s.repro_info.at("commit_hash"));
  EXPECT_EQ(rows[0].package_version, s.repro_info.at("package_version"));
  const auto journal = dir / "j.csv";
  auto written = append_to_journal(s, journal);
  auto read = read_journal(journal);
  ASSERT_EQ(read.size(), 1u);
  EXPECT_EQ(read[0], written[0]);
}

TEST(Journal, UnfinishedStudyWritesNothing) {
  TempDir dir;
  StudyOptions o;
  o.seeds_per_task = 1;
  o.id = "idle";
  auto s = make_study(synthetic_benchmark(), {oracle_agent_args()}, "", dir.path(), o);
  EXPECT_TRUE(journal_rows(s).empty());
}

TEST(Journal, BadHeaderOrMissingFile) {
  TempDir dir;
  EXPECT_THROW(read_journal(dir / "none.csv"), ConfigError);
  std::ofstream(dir / "bad.csv") << "agent_name,study_id\n";
  EXPECT_THROW(read_journal(dir / "bad.csv"), ConfigError);
}

TEST(Csv, EscapeAndSplitRoundTrip) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  const std::vector<std::string> fields = {"x", "a,b", "q\"q", "", "end"};
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_escape(fields[i]);
  EXPECT_EQ(csv_split(line), fields);
}

TEST(Journal, ColumnsFrozen) {
  EXPECT_EQ(std::string(kJournalColumns.front()), "study_id");
  EXPECT_EQ(std::string(kJournalColumns.back()), "duplicate");
  EXPECT_EQ(kJournalColumns.size(), 14u);
}

}  // namespace
}  // namespace wgym
