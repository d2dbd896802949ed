#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace wgym {

struct Benchmark;

using ReproInfo = std::map<std::string, std::string>;

// Keys every ReproInfo carries.
inline constexpr const char* kReproKeys[] = {"benchmark_version", "package_version",
                                             "commit_hash", "os_version", "timestamp"};

std::string package_version();
// WGYM_COMMIT if set, else `git rev-parse HEAD` run in `repo_dir`, else
// "unknown".
std::string commit_hash(const std::filesystem::path& repo_dir = std::filesystem::current_path());
// "<sysname> <release> <machine>" from uname.
std::string os_version();
// UTC, ISO 8601 with seconds.
std::string utc_timestamp();

ReproInfo collect_repro_info(const Benchmark& benchmark);

}  // namespace wgym
