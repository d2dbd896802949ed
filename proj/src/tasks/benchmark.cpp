#include "wgym/tasks/benchmark.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "wgym/common/errors.hpp"
#include "wgym/tasks/synthetic.hpp"

namespace wgym {

std::string_view to_string(Split s) { return s == Split::train ? "train" : "test"; }

Split split_from_string(std::string_view name) {
  if (name == "train") return Split::train;
  if (name == "test") return Split::test;
  throw ConfigError("unknown split '" + std::string(name) + "' (expected train or test)");
}

std::string EpisodeSpec::key() const { return fmt::format("{}.{}", task_id, seed); }

std::string EpisodeSpec::dir_name() const {
  return fmt::format("{}.{}.{}", task_id, seed, attempt);
}

const TaskSpec* Benchmark::find_task(std::string_view id) const {
  for (const auto& t : tasks) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

namespace {

std::vector<std::string> find_cycle(const Benchmark& b) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [from, to] : b.dependency_edges) adj[from].push_back(to);
  std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::vector<std::string> cycle;
  std::function<bool(const std::string&)> visit = [&](const std::string& v) {
    color[v] = 1;
    stack.push_back(v);
    for (const auto& w : adj[v]) {
      if (color[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle.assign(it, stack.end());
        cycle.push_back(w);
        return true;
      }
      if (color[w] == 0 && visit(w)) return true;
    }
    stack.pop_back();
    color[v] = 2;
    return false;
  };
  for (const auto& t : b.tasks) {
    if (color[t.id] == 0 && visit(t.id)) return cycle;
  }
  return {};
}

}  // namespace

void validate_benchmark(const Benchmark& b) {
  if (b.name.empty()) throw ConfigError("benchmark has no name");
  if (b.tasks.empty()) throw ConfigError(fmt::format("benchmark '{}' has no tasks", b.name));
  if (b.suggested_seeds_per_task < 1 || b.suggested_max_steps < 1) {
    throw ConfigError(fmt::format("benchmark '{}': suggested seeds and max steps must be >= 1",
                                  b.name));
  }
  if (b.suggested_action_categories.empty()) {
    throw ConfigError(fmt::format("benchmark '{}': no suggested action categories", b.name));
  }
  std::set<std::string> ids;
  for (const auto& t : b.tasks) {
    if (!ids.insert(t.id).second) {
      throw ConfigError(fmt::format("benchmark '{}': duplicate task '{}'", b.name, t.id));
    }
    if (t.default_max_steps < 1) {
      throw ConfigError(fmt::format("task '{}': max_steps must be >= 1", t.id));
    }
    if (!b.split_assignment.count(t.id)) {
      throw ConfigError(fmt::format("task '{}' has no split", t.id));
    }
  }
  if (b.split_assignment.size() != ids.size()) {
    for (const auto& [id, _] : b.split_assignment) {
      if (!ids.count(id)) throw ConfigError(fmt::format("split names unknown task '{}'", id));
    }
  }
  for (const auto& [from, to] : b.dependency_edges) {
    for (const auto& id : {from, to}) {
      if (!ids.count(id)) {
        throw ConfigError(fmt::format("dependency names unknown task '{}'", id));
      }
    }
  }
  if (auto cycle = find_cycle(b); !cycle.empty()) {
    throw ConfigError(fmt::format("dependency cycle in benchmark '{}': {}", b.name,
                                  fmt::join(cycle, " -> ")));
  }
  if (b.episode_list) {
    for (const auto& [id, seed] : *b.episode_list) {
      if (!ids.count(id)) throw ConfigError(fmt::format("episode list names unknown task '{}'", id));
    }
  }
}

void validate_benchmark(const Benchmark& b, const TaskRegistry& registry) {
  validate_benchmark(b);
  for (const auto& t : b.tasks) {
    if (!registry.contains(t.id)) {
      throw ConfigError(fmt::format("benchmark '{}' uses unregistered task '{}'", b.name, t.id));
    }
  }
}

Benchmark benchmark_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  Benchmark b;
  try {
    b.name = j.at("name").get<std::string>();
    b.version = j.value("version", "1");
    if (j.contains("suggested")) {
      const auto& s = j.at("suggested");
      if (s.contains("action_categories")) {
        b.suggested_action_categories.clear();
        for (const auto& c : s.at("action_categories")) {
          b.suggested_action_categories.insert(action_category_from_string(c.get<std::string>()));
        }
      }
      b.suggested_seeds_per_task = s.value("seeds_per_task", b.suggested_seeds_per_task);
      b.suggested_max_steps = s.value("max_steps", b.suggested_max_steps);
    }
    for (const auto& t : j.at("tasks")) {
      TaskSpec spec = t.get<TaskSpec>();
      if (!t.contains("max_steps")) spec.default_max_steps = b.suggested_max_steps;
      b.split_assignment[spec.id] = split_from_string(t.value("split", "test"));
      b.tasks.push_back(std::move(spec));
    }
    for (const auto& e : j.value("dependencies", nlohmann::json::array())) {
      b.dependency_edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
    }
    if (j.contains("episodes")) {
      b.episode_list.emplace();
      for (const auto& e : j.at("episodes")) {
        b.episode_list->emplace_back(e.at("task").get<std::string>(),
                                     e.at("seed").get<std::uint64_t>());
      }
    }
    if (j.contains("fixtures")) {
      std::filesystem::path p = j.at("fixtures").get<std::string>();
      b.fixture_file = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed benchmark manifest: ") + e.what());
  }
  validate_benchmark(b);
  return b;
}

nlohmann::json to_json(const Benchmark& b) {
  nlohmann::json cats = nlohmann::json::array();
  for (auto c : b.suggested_action_categories) cats.push_back(to_string(c));
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& t : b.tasks) {
    nlohmann::json tj = t;
    if (auto it = b.split_assignment.find(t.id); it != b.split_assignment.end()) {
      tj["split"] = to_string(it->second);
    }
    tasks.push_back(std::move(tj));
  }
  nlohmann::json deps = nlohmann::json::array();
  for (const auto& [from, to] : b.dependency_edges) deps.push_back({from, to});
  nlohmann::json j{{"name", b.name},
                   {"version", b.version},
                   {"suggested",
                    {{"action_categories", cats},
                     {"seeds_per_task", b.suggested_seeds_per_task},
                     {"max_steps", b.suggested_max_steps}}},
                   {"tasks", tasks},
                   {"dependencies", deps}};
  if (b.episode_list) {
    auto eps = nlohmann::json::array();
    for (const auto& [id, seed] : *b.episode_list) eps.push_back({{"task", id}, {"seed", seed}});
    j["episodes"] = eps;
  }
  if (b.fixture_file) j["fixtures"] = b.fixture_file->string();
  return j;
}

Benchmark load_benchmark(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open benchmark manifest " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed benchmark manifest " + path.string() + ": " + e.what());
  }
  return benchmark_from_json(j, path.parent_path());
}

Benchmark resolve_benchmark(const std::string& name_or_path) {
  if (name_or_path == "synthetic") return synthetic_benchmark();
  if (std::filesystem::is_regular_file(name_or_path)) return load_benchmark(name_or_path);
  throw ConfigError("unknown benchmark '" + name_or_path +
                    "' (use 'synthetic' or a manifest path)");
}

std::vector<EpisodeSpec> benchmark_episodes(const Benchmark& b, int seeds_per_task,
                                            std::optional<Split> split) {
  if (seeds_per_task < 1) throw ConfigError("seeds_per_task must be >= 1");
  auto selected = [&](const std::string& id) {
    if (!split) return true;
    auto it = b.split_assignment.find(id);
    return it != b.split_assignment.end() && it->second == *split;
  };
  std::vector<EpisodeSpec> out;
  if (b.episode_list) {
    for (const auto& [id, seed] : *b.episode_list) {
      if (!selected(id)) continue;
      const TaskSpec* t = b.find_task(id);
      out.push_back({0, id, seed, t ? t->default_max_steps : b.suggested_max_steps, 0});
    }
    return out;
  }
  for (const auto& t : b.tasks) {
    if (!selected(t.id)) continue;
    for (int s = 0; s < seeds_per_task; ++s) {
      out.push_back({0, t.id, static_cast<std::uint64_t>(s), t.default_max_steps, 0});
    }
  }
  return out;
}

std::vector<EpisodeSpec> benchmark_episodes(const Benchmark& b) {
  return benchmark_episodes(b, b.suggested_seeds_per_task);
}

std::vector<std::pair<std::string, std::string>> dependency_order(const Benchmark& b) {
  if (auto cycle = find_cycle(b); !cycle.empty()) {
    throw ConfigError(fmt::format("dependency cycle in benchmark '{}': {}", b.name,
                                  fmt::join(cycle, " -> ")));
  }
  return b.dependency_edges;
}

void prepare_backend(const Benchmark& b, FixtureStore& fixtures) {
  if (b.fixture_file) {
    if (!std::filesystem::is_regular_file(*b.fixture_file)) {
      throw ConfigError(fmt::format("benchmark '{}': fixture file {} does not exist", b.name,
                                    b.fixture_file->string()));
    }
    fixtures.load_file(*b.fixture_file);
  } else {
    fixtures.reset();
  }
}

}  // namespace wgym
