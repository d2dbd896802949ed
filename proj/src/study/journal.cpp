#include "wgym/study/journal.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "wgym/common/errors.hpp"

namespace wgym {

namespace {

std::string header_line() {
  std::string out;
  for (std::size_t i = 0; i < kJournalColumns.size(); ++i) {
    if (i) out += ',';
    out += kJournalColumns[i];
  }
  return out;
}

std::string row_line(const JournalRow& r) {
  const std::vector<std::string> f = {r.study_id,
                                      r.agent_name,
                                      r.benchmark,
                                      r.benchmark_version,
                                      std::to_string(r.n),
                                      fmt::format("{}", r.success_rate),
                                      fmt::format("{}", r.std_error),
                                      std::to_string(r.n_errors),
                                      r.package_version,
                                      r.commit_hash,
                                      r.os_version,
                                      r.study_timestamp,
                                      r.appended_at,
                                      r.duplicate ? "true" : "false"};
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(f[i]);
  }
  return out;
}

JournalRow parse_row(const std::vector<std::string>& f) {
  if (f.size() != kJournalColumns.size()) {
    throw ConfigError(fmt::format("journal row has {} fields, expected {}", f.size(),
                                  kJournalColumns.size()));
  }
  JournalRow r;
  r.study_id = f[0];
  r.agent_name = f[1];
  r.benchmark = f[2];
  r.benchmark_version = f[3];
  try {
    r.n = std::stoull(f[4]);
    r.success_rate = std::stod(f[5]);
    r.std_error = std::stod(f[6]);
    r.n_errors = std::stoull(f[7]);
  } catch (const std::exception&) {
    throw ConfigError("journal row has a malformed number");
  }
  r.package_version = f[8];
  r.commit_hash = f[9];
  r.os_version = f[10];
  r.study_timestamp = f[11];
  r.appended_at = f[12];
  r.duplicate = f[13] == "true";
  return r;
}

std::vector<JournalRow> parse_journal(const std::string& text) {
  std::vector<JournalRow> out;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      if (line != header_line()) throw ConfigError("journal header does not match the columns");
      first = false;
      continue;
    }
    out.push_back(parse_row(csv_split(line)));
  }
  return out;
}

class FileLock {
 public:
  explicit FileLock(int fd) : fd_(fd) {
    while (flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) throw std::runtime_error(std::string("flock: ") + std::strerror(errno));
    }
  }
  ~FileLock() { flock(fd_, LOCK_UN); }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_;
};

}  // namespace

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::vector<JournalRow> journal_rows(const Study& study) {
  std::vector<JournalRow> out;
  const auto metrics = aggregate(study);
  auto repro = [&](const char* k) {
    auto it = study.repro_info.find(k);
    return it == study.repro_info.end() ? std::string("unknown") : it->second;
  };
  for (const auto& [k, m] : metrics) {
    JournalRow r;
    r.study_id = study.id;
    r.agent_name = study.agent_args_list.at(static_cast<std::size_t>(k)).agent_name;
    r.benchmark = study.benchmark.name;
    r.benchmark_version = repro("benchmark_version");
    r.n = m.overall.n;
    r.success_rate = m.overall.success_rate;
    r.std_error = m.overall.std_error;
    r.n_errors = m.n_errors;
    r.package_version = repro("package_version");
    r.commit_hash = repro("commit_hash");
    r.os_version = repro("os_version");
    r.study_timestamp = repro("timestamp");
    r.appended_at = utc_timestamp();
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<JournalRow> append_to_journal(const Study& study, const std::filesystem::path& journal) {
  auto rows = journal_rows(study);
  if (rows.empty()) throw AggregationError("study " + study.id + " has no finished episodes");
  if (journal.has_parent_path()) std::filesystem::create_directories(journal.parent_path());

  const int fd = ::open(journal.c_str(), O_RDWR | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw ConfigError(fmt::format("cannot open journal {}: {}", journal.string(), std::strerror(errno)));
  struct Closer {
    int fd;
    ~Closer() { ::close(fd); }
  } closer{fd};
  FileLock lock(fd);

  std::string existing;
  {
    std::ifstream in(journal);
    std::stringstream ss;
    ss << in.rdbuf();
    existing = ss.str();
  }
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& r : parse_journal(existing)) seen.emplace(r.study_id, r.agent_name, r.benchmark);

  std::string out;
  if (existing.empty()) out += header_line() + "\n";
  for (auto& r : rows) {
    r.duplicate = !seen.emplace(r.study_id, r.agent_name, r.benchmark).second;
    out += row_line(r) + "\n";
  }
  std::size_t written = 0;
  while (written < out.size()) {
    const ssize_t n = ::write(fd, out.data() + written, out.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error(std::string("journal write: ") + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  return rows;
}

std::vector<JournalRow> read_journal(const std::filesystem::path& journal) {
  std::ifstream in(journal);
  if (!in) throw ConfigError("cannot read journal " + journal.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_journal(ss.str());
}

}  // namespace wgym
