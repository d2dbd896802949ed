#include "wgym/study/repro.hpp"

#include <sys/utsname.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>

#include <fmt/format.h>

#include "wgym/tasks/benchmark.hpp"

#ifndef WGYM_VERSION
#define WGYM_VERSION "0.0.0"
#endif

namespace wgym {

std::string package_version() { return WGYM_VERSION; }

std::string commit_hash(const std::filesystem::path& repo_dir) {
  if (const char* env = std::getenv("WGYM_COMMIT"); env && *env) return env;
  const std::string cmd =
      fmt::format("git -C '{}' rev-parse HEAD 2>/dev/null", repo_dir.string());
  std::string out;
  if (FILE* pipe = popen(cmd.c_str(), "r")) {
    std::array<char, 128> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    pclose(pipe);
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  if (out.size() != 40) return "unknown";
  return out;
}

std::string os_version() {
  utsname u{};
  if (uname(&u) != 0) return "unknown";
  return fmt::format("{} {} {}", u.sysname, u.release, u.machine);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

ReproInfo collect_repro_info(const Benchmark& benchmark) {
  return {{"benchmark", benchmark.name},
          {"benchmark_version", benchmark.version},
          {"package_version", package_version()},
          {"commit_hash", commit_hash()},
          {"os_version", os_version()},
          {"timestamp", utc_timestamp()}};
}

}  // namespace wgym
