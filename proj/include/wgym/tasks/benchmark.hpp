#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wgym/actions/catalog.hpp"
#include "wgym/backend/fixtures.hpp"
#include "wgym/tasks/registry.hpp"

namespace wgym {

enum class Split { train, test };

std::string_view to_string(Split s);
Split split_from_string(std::string_view name);

struct EpisodeSpec {
  int agent_index = 0;
  std::string task_id;
  std::uint64_t seed = 0;
  int max_steps = 10;
  int attempt = 0;

  // "<task_id>.<seed>"; stable across attempts.
  std::string key() const;
  // "<task_id>.<seed>.<attempt>"
  std::string dir_name() const;

  bool operator==(const EpisodeSpec&) const = default;
};

struct Benchmark {
  std::string name;
  std::string version = "1";
  std::vector<TaskSpec> tasks;
  // (before, after): `after` may start only once `before` has finished.
  std::vector<std::pair<std::string, std::string>> dependency_edges;
  std::set<ActionCategory> suggested_action_categories = all_action_categories();
  int suggested_seeds_per_task = 5;
  int suggested_max_steps = 10;
  std::map<std::string, Split> split_assignment;
  // Explicit (task_id, seed) list; when present it replaces the
  // tasks x seeds product.
  std::optional<std::vector<std::pair<std::string, std::uint64_t>>> episode_list;
  // Seeded entries for the shared fixture store, relative to the manifest.
  std::optional<std::filesystem::path> fixture_file;

  const TaskSpec* find_task(std::string_view id) const;
  bool operator==(const Benchmark&) const = default;
};

// Structural checks: unique ids, positive parameters, edges over known ids,
// no dependency cycle, every task in exactly one split. Throws ConfigError.
void validate_benchmark(const Benchmark& benchmark);
// Also checks that every task id is registered.
void validate_benchmark(const Benchmark& benchmark, const TaskRegistry& registry);

// Manifest I/O. Loading validates structure (not registration).
Benchmark benchmark_from_json(const nlohmann::json& j,
                              const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const Benchmark& benchmark);
Benchmark load_benchmark(const std::filesystem::path& path);
// A name from the built-in set, or a path to a manifest file.
Benchmark resolve_benchmark(const std::string& name_or_path);

// Tasks x seeds 0..n-1 in task order, or the explicit episode list. A task
// with no seed diversity still gets n episodes if asked. `split` restricts
// the task set.
std::vector<EpisodeSpec> benchmark_episodes(const Benchmark& benchmark, int seeds_per_task,
                                            std::optional<Split> split = std::nullopt);
std::vector<EpisodeSpec> benchmark_episodes(const Benchmark& benchmark);

// The edge set, after checking it is acyclic. A cycle raises ConfigError
// listing it as "a -> b -> a".
std::vector<std::pair<std::string, std::string>> dependency_order(const Benchmark& benchmark);

// Restores the shared backend state before an agent is evaluated: reloads
// the fixture file when the manifest names one, otherwise resets the store
// to its seeded entries. Idempotent. Throws ConfigError with a diagnostic
// when the fixture file cannot be used.
void prepare_backend(const Benchmark& benchmark, FixtureStore& fixtures);

}  // namespace wgym
