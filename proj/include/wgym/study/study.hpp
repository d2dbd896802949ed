#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgym/agent/agent_args.hpp"
#include "wgym/study/metrics.hpp"
#include "wgym/study/repro.hpp"
#include "wgym/tasks/benchmark.hpp"

namespace wgym {

// Relaunches after the first attempt; attempts are numbered 0..kMaxRelaunches.
inline constexpr int kMaxRelaunches = 3;

inline constexpr const char* kStudyFile = "study.json";
inline constexpr const char* kSpecFile = "spec.json";
inline constexpr const char* kResultFile = "result.json";
inline constexpr const char* kStepsFile = "steps.jsonl";

struct Study {
  std::string id;
  Benchmark benchmark;
  std::vector<AgentArgs> agent_args_list;
  std::string comment;
  // Grouped by agent; attempt is always 0 here.
  std::vector<EpisodeSpec> episodes;
  ReproInfo repro_info;
  SigmaKind sigma = SigmaKind::population;
  std::filesystem::path dir;

  // Throws ConfigError when study.json is missing or malformed.
  static Study load(const std::filesystem::path& dir);
  void save() const;

  std::filesystem::path agent_dir(int agent_index) const;
  std::filesystem::path episode_dir(const EpisodeSpec& spec) const;
  // "<study id>:agent_<k>:<task>.<seed>.<attempt>", used by the HTTP API.
  std::string episode_id(const EpisodeSpec& spec) const;
  std::vector<EpisodeSpec> agent_episodes(int agent_index) const;
};

nlohmann::json to_json(const Study& study);

struct StudyOptions {
  // Defaults to the benchmark's suggestion.
  std::optional<int> seeds_per_task;
  std::optional<Split> split;
  // Defaults to "<timestamp>_<agent names>_on_<benchmark>".
  std::optional<std::string> id;
  SigmaKind sigma = SigmaKind::population;
};

// Validates the benchmark against the registry, applies each agent's
// benchmark hook and writes <root>/<id>/study.json. Throws ConfigError.
Study make_study(const Benchmark& benchmark, std::vector<AgentArgs> agents, std::string comment,
                 const std::filesystem::path& root, const StudyOptions& options = {});

// The newest attempt of one study episode as found on disk.
struct EpisodeRecord {
  EpisodeSpec spec;
  std::filesystem::path dir;
  bool started = false;
  std::optional<EpisodeResult> result;
  // A result file exists but could not be read.
  bool corrupt = false;
};

std::vector<EpisodeRecord> episode_records(const Study& study);
std::optional<EpisodeResult> read_result(const std::filesystem::path& episode_dir,
                                         bool* corrupt = nullptr);

// Unstarted and unfinished episodes (same attempt number, to be rerun from
// scratch) and, if asked, errored ones that still have relaunches left (next
// attempt number). Corrupt records count as unfinished, with a warning on
// stderr.
std::vector<EpisodeSpec> find_incomplete(const Study& study, bool include_errors);

// Per agent index over the newest attempts. Agents without a finished
// episode are left out.
std::map<int, Metrics> aggregate(const Study& study);

// Writes via a temporary file and rename.
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace wgym
