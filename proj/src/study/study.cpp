#include "wgym/study/study.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "wgym/common/errors.hpp"
#include "wgym/tasks/registry.hpp"

namespace wgym {

namespace fs = std::filesystem;

namespace {

nlohmann::json spec_json(const EpisodeSpec& e) {
  return {{"agent_index", e.agent_index}, {"task_id", e.task_id}, {"seed", e.seed},
          {"max_steps", e.max_steps},     {"attempt", e.attempt}};
}

EpisodeSpec spec_from_json(const nlohmann::json& j) {
  EpisodeSpec e;
  e.agent_index = j.at("agent_index").get<int>();
  e.task_id = j.at("task_id").get<std::string>();
  e.seed = j.at("seed").get<std::uint64_t>();
  e.max_steps = j.at("max_steps").get<int>();
  e.attempt = j.value("attempt", 0);
  return e;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

std::string category_of(const Benchmark& b, const std::string& task_id) {
  const TaskSpec* t = b.find_task(task_id);
  if (!t) return {};
  auto it = t->metadata.find("category");
  return it == t->metadata.end() ? std::string() : it->second;
}

}  // namespace

void write_json_atomic(const fs::path& path, const nlohmann::json& j) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

fs::path Study::agent_dir(int agent_index) const {
  return dir / fmt::format("agent_{}", agent_index);
}

fs::path Study::episode_dir(const EpisodeSpec& spec) const {
  return agent_dir(spec.agent_index) / spec.dir_name();
}

std::string Study::episode_id(const EpisodeSpec& spec) const {
  return fmt::format("{}:agent_{}:{}", id, spec.agent_index, spec.dir_name());
}

std::vector<EpisodeSpec> Study::agent_episodes(int agent_index) const {
  std::vector<EpisodeSpec> out;
  for (const auto& e : episodes) {
    if (e.agent_index == agent_index) out.push_back(e);
  }
  return out;
}

nlohmann::json to_json(const Study& s) {
  nlohmann::json agents = nlohmann::json::array();
  for (const auto& a : s.agent_args_list) agents.push_back(a);
  nlohmann::json eps = nlohmann::json::array();
  for (const auto& e : s.episodes) eps.push_back(spec_json(e));
  return {{"id", s.id},
          {"comment", s.comment},
          {"benchmark", to_json(s.benchmark)},
          {"agents", agents},
          {"episodes", eps},
          {"repro_info", s.repro_info},
          {"sigma", to_string(s.sigma)}};
}

void Study::save() const {
  fs::create_directories(dir);
  write_json_atomic(dir / kStudyFile, to_json(*this));
}

Study Study::load(const fs::path& dir) {
  const nlohmann::json j = read_json_file(dir / kStudyFile);
  Study s;
  try {
    s.id = j.at("id").get<std::string>();
    s.comment = j.value("comment", "");
    s.benchmark = benchmark_from_json(j.at("benchmark"), dir);
    for (const auto& a : j.at("agents")) s.agent_args_list.push_back(a.get<AgentArgs>());
    for (const auto& e : j.at("episodes")) s.episodes.push_back(spec_from_json(e));
    s.repro_info = j.at("repro_info").get<ReproInfo>();
    s.sigma = sigma_kind_from_string(j.value("sigma", "population"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("{}: malformed study: {}", (dir / kStudyFile).string(), e.what()));
  }
  for (const char* key : kReproKeys) {
    if (!s.repro_info.count(key)) {
      throw ConfigError(fmt::format("study {} lacks repro_info.{}", s.id, key));
    }
  }
  s.dir = dir;
  return s;
}

Study make_study(const Benchmark& benchmark, std::vector<AgentArgs> agents, std::string comment,
                 const fs::path& root, const StudyOptions& options) {
  validate_benchmark(benchmark, TaskRegistry::global());
  if (agents.empty()) throw ConfigError("a study needs at least one agent");
  Study s;
  s.benchmark = benchmark;
  if (s.benchmark.fixture_file) s.benchmark.fixture_file = fs::absolute(*s.benchmark.fixture_file);
  for (auto& a : agents) {
    a.set_benchmark(benchmark);
    a.validate();
  }
  s.agent_args_list = std::move(agents);
  s.comment = std::move(comment);
  s.sigma = options.sigma;

  const int seeds = options.seeds_per_task.value_or(benchmark.suggested_seeds_per_task);
  if (seeds < 1) throw ConfigError("seeds_per_task must be >= 1");
  const auto base = benchmark_episodes(benchmark, seeds, options.split);
  for (std::size_t k = 0; k < s.agent_args_list.size(); ++k) {
    for (EpisodeSpec e : base) {
      e.agent_index = static_cast<int>(k);
      e.attempt = 0;
      s.episodes.push_back(std::move(e));
    }
  }
  s.repro_info = collect_repro_info(benchmark);

  if (options.id) {
    s.id = *options.id;
    if (s.id.empty() || sanitize(s.id) != s.id) {
      throw ConfigError("study id may only contain letters, digits, '-', '_' and '.'");
    }
    if (fs::exists(root / s.id)) throw ConfigError("study " + s.id + " already exists");
  } else {
    std::string names;
    for (const auto& a : s.agent_args_list) {
      if (!names.empty()) names += "_";
      names += a.agent_name;
    }
    std::string ts = s.repro_info["timestamp"];
    for (char& c : ts) {
      if (c == ':') c = '-';
    }
    const std::string stem = sanitize(fmt::format("{}_{}_on_{}", ts, names, benchmark.name));
    s.id = stem;
    for (int i = 2; fs::exists(root / s.id); ++i) s.id = fmt::format("{}_{}", stem, i);
  }
  s.dir = root / s.id;
  s.save();
  for (std::size_t k = 0; k < s.agent_args_list.size(); ++k) {
    fs::create_directories(s.agent_dir(static_cast<int>(k)));
  }
  return s;
}

std::optional<EpisodeResult> read_result(const fs::path& episode_dir, bool* corrupt) {
  if (corrupt) *corrupt = false;
  const fs::path p = episode_dir / kResultFile;
  if (!fs::exists(p)) return std::nullopt;
  try {
    std::ifstream in(p);
    auto r = nlohmann::json::parse(in).get<EpisodeResult>();
    if (!r.consistent()) throw std::runtime_error("inconsistent result");
    return r;
  } catch (const std::exception&) {
    if (corrupt) *corrupt = true;
    return std::nullopt;
  }
}

std::vector<EpisodeRecord> episode_records(const Study& study) {
  std::vector<EpisodeRecord> out;
  for (const auto& base : study.episodes) {
    EpisodeRecord rec;
    rec.spec = base;
    for (int a = kMaxRelaunches; a >= 0; --a) {
      EpisodeSpec s = base;
      s.attempt = a;
      if (fs::exists(study.episode_dir(s))) {
        rec.spec = s;
        rec.started = true;
        break;
      }
    }
    rec.dir = study.episode_dir(rec.spec);
    if (rec.started) rec.result = read_result(rec.dir, &rec.corrupt);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<EpisodeSpec> find_incomplete(const Study& study, bool include_errors) {
  std::vector<EpisodeSpec> out;
  for (const auto& rec : episode_records(study)) {
    if (rec.corrupt) {
      fmt::print(stderr, "warning: unreadable result for {}, treating it as incomplete\n",
                 study.episode_id(rec.spec));
    }
    if (!rec.result || rec.result->status == EpisodeStatus::incomplete) {
      out.push_back(rec.spec);
    } else if (include_errors && rec.result->status == EpisodeStatus::error &&
               rec.spec.attempt < kMaxRelaunches) {
      EpisodeSpec next = rec.spec;
      ++next.attempt;
      out.push_back(next);
    }
  }
  return out;
}

std::map<int, Metrics> aggregate(const Study& study) {
  std::map<int, std::vector<CategorizedResult>> per_agent;
  for (const auto& rec : episode_records(study)) {
    EpisodeResult r;
    if (rec.result) r = *rec.result;
    per_agent[rec.spec.agent_index].push_back({category_of(study.benchmark, rec.spec.task_id), r});
  }
  std::map<int, Metrics> out;
  for (const auto& [k, results] : per_agent) {
    try {
      out[k] = aggregate_results(results, study.sigma);
    } catch (const AggregationError&) {
    }
  }
  return out;
}

}  // namespace wgym
