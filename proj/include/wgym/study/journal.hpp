#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "wgym/study/study.hpp"

namespace wgym {

// Column order of the reproducibility journal. Frozen: new columns may only
// be appended at the end.
inline constexpr std::array<const char*, 14> kJournalColumns = {
    "study_id",     "agent_name",      "benchmark",   "benchmark_version", "n",
    "success_rate", "std_error",       "n_errors",    "package_version",   "commit_hash",
    "os_version",   "study_timestamp", "appended_at", "duplicate"};

struct JournalRow {
  std::string study_id;
  std::string agent_name;
  std::string benchmark;
  std::string benchmark_version;
  std::size_t n = 0;
  double success_rate = 0;
  double std_error = 0;
  std::size_t n_errors = 0;
  std::string package_version;
  std::string commit_hash;
  std::string os_version;
  std::string study_timestamp;
  std::string appended_at;
  // An earlier row has the same study, agent and benchmark.
  bool duplicate = false;

  bool operator==(const JournalRow&) const = default;
};

// One row per agent with at least one finished episode.
std::vector<JournalRow> journal_rows(const Study& study);

// Appends under an exclusive advisory lock, writing the header when the file
// is new. Returns the rows written (with duplicate flags set).
std::vector<JournalRow> append_to_journal(const Study& study, const std::filesystem::path& journal);

// Throws ConfigError for a missing file or a header that does not match.
std::vector<JournalRow> read_journal(const std::filesystem::path& journal);

std::string csv_escape(const std::string& field);
std::vector<std::string> csv_split(const std::string& line);

}  // namespace wgym
