#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <json.hpp>

#include "wgym/agent/agent.hpp"
#include "wgym/backend/browser.hpp"
#include "wgym/study/live.hpp"
#include "wgym/study/study.hpp"

namespace wgym {

struct RunHooks {
  // Per-attempt backend fault injection.
  std::function<SimBrowser::FaultHook(const EpisodeSpec&)> fault_hook;
  // Replaces AgentArgs::make_agent.
  std::function<std::unique_ptr<Agent>(const AgentArgs&, const EpisodeSpec&)> make_agent;
  std::function<void(const EpisodeSpec&)> on_start;
  // After each step record is on disk; `step` counts from 0.
  std::function<void(const EpisodeSpec&, int step)> on_step;
  std::function<void(const EpisodeSpec&, const EpisodeResult&)> on_finish;
};

struct RunOptions {
  int n_jobs = 1;
  // Passes after the first one that pick up errored episodes.
  int max_relaunch_rounds = kMaxRelaunches;
  RunHooks hooks;
  // When set, every episode gets a session keyed by its episode id.
  std::shared_ptr<LiveHub> live;
};

struct RunSummary {
  std::size_t episodes_run = 0;
  int passes = 0;
  // Episodes still in error after the last pass.
  std::size_t errors_left = 0;
};

// Runs every unfinished episode (and relaunchable errors). Agents run one
// after the other, each after prepare_backend; within an agent, episodes run
// on up to n_jobs threads in dependency order. Results are written as each
// episode ends, so an interrupted study resumes with another call.
RunSummary run_study(const Study& study, const RunOptions& options = {});

// One attempt, start to finish, written to study.episode_dir(spec). Never
// throws for episode-level problems; they become status error.
EpisodeResult run_episode(const Study& study, const EpisodeSpec& spec,
                          const std::shared_ptr<FixtureStore>& fixtures,
                          const RunOptions& options = {});

// The step log of an episode directory; throws ConfigError when absent.
std::vector<nlohmann::json> read_step_log(const std::filesystem::path& episode_dir);

}  // namespace wgym
