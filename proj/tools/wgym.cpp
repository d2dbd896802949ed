#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wgym/actions/describe.hpp"
#include "wgym/common/errors.hpp"
#include "wgym/study/journal.hpp"
#include "wgym/study/replay.hpp"
#include "wgym/study/runner.hpp"
#include "wgym/study/server.hpp"
#include "wgym/tasks/registry.hpp"

namespace fs = std::filesystem;
using namespace wgym;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailures = 1;
constexpr int kExitConfig = 2;

// An agent is a flat JSON file of AgentArgs, or one of the shortcuts
// "oracle", "random[:seed]" and "scripted:<script>".
AgentArgs load_agent(const std::string& spec) {
  if (fs::is_regular_file(spec)) {
    std::ifstream in(spec);
    try {
      return nlohmann::json::parse(in).get<AgentArgs>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(fmt::format("{}: {}", spec, e.what()));
    }
  }
  if (spec == "oracle") return oracle_agent_args();
  if (spec.rfind("random", 0) == 0) {
    std::uint64_t seed = 0;
    if (spec.size() > 7 && spec[6] == ':') seed = std::stoull(spec.substr(7));
    return random_agent_args(seed);
  }
  if (spec.rfind("scripted:", 0) == 0) return generic_agent_args(spec);
  throw ConfigError(fmt::format("agent '{}' is neither a file nor a known shortcut", spec));
}

int status_exit(const Study& study) {
  for (const auto& rec : episode_records(study)) {
    if (!rec.result || rec.result->status != EpisodeStatus::success) return kExitFailures;
  }
  return kExitOk;
}

void print_report(const Study& study, bool as_json) {
  const auto metrics = aggregate(study);
  if (as_json) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [k, m] : metrics) {
      out.push_back({{"agent_index", k},
                     {"agent_name", study.agent_args_list.at(static_cast<std::size_t>(k)).agent_name},
                     {"metrics", m}});
    }
    fmt::print("{}\n", out.dump(2));
    return;
  }
  fmt::print("study {} on {} ({} episodes)\n", study.id, study.benchmark.name, study.episodes.size());
  fmt::print("{:<28} {:>5} {:>8} {:>8} {:>6} {:>6}\n", "agent", "n", "success", "std_err",
             "errors", "incompl");
  for (std::size_t k = 0; k < study.agent_args_list.size(); ++k) {
    auto it = metrics.find(static_cast<int>(k));
    const std::string& name = study.agent_args_list[k].agent_name;
    if (it == metrics.end()) {
      fmt::print("{:<28} {:>5}\n", name, "-");
      continue;
    }
    const Metrics& m = it->second;
    fmt::print("{:<28} {:>5} {:>8.4f} {:>8.4f} {:>6} {:>6}\n", name, m.overall.n,
               m.overall.success_rate, m.overall.std_error, m.n_errors, m.n_incomplete);
    for (const auto& [cat, s] : m.by_category) {
      fmt::print("  {:<26} {:>5} {:>8.4f} {:>8.4f}\n", cat, s.n, s.success_rate, s.std_error);
    }
  }
}

ApiServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Web-agent gym: environments, agents and reproducible studies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", package_version());

  auto* study_cmd = app.add_subcommand("study", "Create, run and inspect studies");
  study_cmd->require_subcommand(1);

  std::string benchmark = "synthetic";
  std::vector<std::string> agents;
  std::string comment;
  std::string root = "studies";
  std::optional<int> seeds;
  std::optional<std::string> id;
  std::optional<std::string> split;
  std::string sigma = "population";
  auto* new_cmd = study_cmd->add_subcommand("new", "Create a study directory");
  new_cmd->add_option("--benchmark", benchmark, "Benchmark name or manifest path")->capture_default_str();
  new_cmd->add_option("--agent", agents, "Agent args file, or oracle | random[:seed] | scripted:<script>")
      ->required();
  new_cmd->add_option("--comment", comment, "Free-form note");
  new_cmd->add_option("--root", root, "Directory holding studies")->capture_default_str();
  new_cmd->add_option("--seeds", seeds, "Seeds per task (default: benchmark suggestion)");
  new_cmd->add_option("--id", id, "Study id (default: timestamp and names)");
  new_cmd->add_option("--split", split, "Only tasks of this split (train or test)");
  new_cmd->add_option("--sigma", sigma, "population or sample")->capture_default_str();

  std::string dir;
  int n_jobs = 1;
  auto* run_cmd = study_cmd->add_subcommand("run", "Run unfinished episodes of a study");
  run_cmd->add_option("dir", dir, "Study directory")->required();
  run_cmd->add_option("--n-jobs", n_jobs, "Parallel workers")->capture_default_str();

  auto* relaunch_cmd = study_cmd->add_subcommand("relaunch", "Rerun errored and unfinished episodes");
  relaunch_cmd->add_option("dir", dir, "Study directory")->required();
  relaunch_cmd->add_option("--n-jobs", n_jobs, "Parallel workers")->capture_default_str();

  bool as_json = false;
  auto* report_cmd = study_cmd->add_subcommand("report", "Print the metrics table");
  report_cmd->add_option("dir", dir, "Study directory")->required();
  report_cmd->add_flag("--json", as_json, "Machine-readable output");

  std::string journal;
  auto* journal_cmd = study_cmd->add_subcommand("journal", "Append results to a journal CSV");
  journal_cmd->add_option("dir", dir, "Study directory")->required();
  journal_cmd->add_option("--journal", journal, "Journal file")->required();

  std::string episode;
  bool all = false;
  auto* replay_cmd = study_cmd->add_subcommand("replay", "Replay episodes and diff prompts");
  replay_cmd->add_option("dir", dir, "Study directory")->required();
  auto* episode_opt = replay_cmd->add_option("--episode", episode, "Episode id or <task>.<seed>");
  replay_cmd->add_flag("--all", all, "Replay every finished episode")->excludes(episode_opt);
  replay_cmd->add_flag("--json", as_json, "Print the full report");

  std::string host = "127.0.0.1";
  int port = 8080;
  bool run_too = false;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the trace API for a study directory");
  serve_cmd->add_option("dir", dir, "Study directory or directory of studies")->required();
  serve_cmd->add_option("--port", port, "Port (0 picks one)")->capture_default_str();
  serve_cmd->add_option("--host", host, "Bind address")->capture_default_str();
  serve_cmd->add_flag("--run", run_too, "Also run the study's pending episodes as live sessions");
  serve_cmd->add_option("--n-jobs", n_jobs, "Parallel workers with --run")->capture_default_str();

  auto* tasks_cmd = app.add_subcommand("tasks", "List registered tasks");
  std::string bench_name;
  auto* bench_cmd = app.add_subcommand("benchmark", "Print a benchmark manifest with its episode count");
  bench_cmd->add_option("name", bench_name, "Benchmark name or manifest path")->required();
  bench_cmd->add_flag("--count", as_json, "Print only the number of episodes");
  auto* actions_cmd = app.add_subcommand("actions", "Print the action space description");
  std::vector<std::string> categories;
  actions_cmd->add_option("--category", categories, "bid, coord, tab, nav, misc");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*new_cmd) {
      std::vector<AgentArgs> list;
      for (const auto& a : agents) list.push_back(load_agent(a));
      StudyOptions opts;
      opts.seeds_per_task = seeds;
      opts.id = id;
      if (split) opts.split = split_from_string(*split);
      opts.sigma = sigma_kind_from_string(sigma);
      const Study s = make_study(resolve_benchmark(benchmark), std::move(list), comment, root, opts);
      fmt::print("{}\n", s.dir.string());
      return kExitOk;
    }
    if (*run_cmd || *relaunch_cmd) {
      const Study s = Study::load(dir);
      RunOptions opts;
      opts.n_jobs = n_jobs;
      const RunSummary sum = run_study(s, opts);
      fmt::print("ran {} episodes in {} passes; {} errors left\n", sum.episodes_run, sum.passes,
                 sum.errors_left);
      print_report(s, false);
      return status_exit(s);
    }
    if (*report_cmd) {
      const Study s = Study::load(dir);
      print_report(s, as_json);
      return status_exit(s);
    }
    if (*journal_cmd) {
      const Study s = Study::load(dir);
      const auto rows = append_to_journal(s, journal);
      for (const auto& r : rows) {
        fmt::print("{} {} n={} success_rate={} std_error={}{}\n", r.study_id, r.agent_name, r.n,
                   r.success_rate, r.std_error, r.duplicate ? " (duplicate)" : "");
      }
      return kExitOk;
    }
    if (*replay_cmd) {
      const Study s = Study::load(dir);
      std::vector<ReplayReport> reports;
      if (all) {
        reports = replay_study(s);
      } else if (!episode.empty()) {
        reports.push_back(replay_episode(s, episode));
      } else {
        throw ConfigError("replay needs --episode or --all");
      }
      bool ok = true;
      for (const auto& r : reports) {
        ok = ok && r.reproduced();
        if (as_json) {
          fmt::print("{}\n", to_json(r).dump(2));
          continue;
        }
        fmt::print("{}: {}\n", r.episode_id, r.reproduced() ? "reproduced" : "differs");
        for (const auto& d : r.steps) {
          if (d.empty()) continue;
          fmt::print("step {}\n", d.step);
          if (d.action_recorded != d.action_replayed) {
            fmt::print("  action: {} -> {}\n", d.action_recorded, d.action_replayed);
          }
          fmt::print("{}{}{}", d.prompt_diff, d.axtree_diff, d.html_diff);
        }
        if (r.divergence_step) {
          fmt::print("diverged at step {}: {}\n", *r.divergence_step, r.divergence_reason);
        }
      }
      return ok ? kExitOk : kExitFailures;
    }
    if (*serve_cmd) {
      auto hub = std::make_shared<LiveHub>();
      ApiServer server(StudyApi(dir, hub));
      const int bound = server.bind(host, port);
      fmt::print("serving {} on http://{}:{}\n", dir, host, bound);
      std::fflush(stdout);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::thread runner;
      if (run_too) {
        runner = std::thread([&] {
          const Study s = Study::load(dir);
          RunOptions opts;
          opts.n_jobs = n_jobs;
          opts.live = hub;
          run_study(s, opts);
          fmt::print("study run finished\n");
          std::fflush(stdout);
        });
      }
      server.listen();
      if (runner.joinable()) runner.join();
      g_server = nullptr;
      return kExitOk;
    }
    if (*bench_cmd) {
      const Benchmark b = resolve_benchmark(bench_name);
      if (as_json) {
        fmt::print("{}\n", benchmark_episodes(b).size());
      } else {
        fmt::print("{}\n", to_json(b).dump(2));
      }
      return kExitOk;
    }
    if (*tasks_cmd) {
      const auto& reg = TaskRegistry::global();
      for (const auto& t : reg.ids()) {
        const TaskSpec spec = reg.spec(t);
        fmt::print("{}  max_steps={} seed_diversity={}\n", t, spec.default_max_steps,
                   to_string(spec.seed_diversity));
      }
      return kExitOk;
    }
    if (*actions_cmd) {
      ActionSetConfig c;
      if (!categories.empty()) {
        c.enabled_categories.clear();
        for (const auto& name : categories) c.enabled_categories.insert(action_category_from_string(name));
      }
      fmt::print("{}\n", describe(c));
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return kExitConfig;
  } catch (const RegistrationError& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return kExitConfig;
  } catch (const AggregationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitFailures;
  }
  return kExitOk;
}
