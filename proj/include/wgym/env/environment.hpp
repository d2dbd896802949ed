#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wgym/actions/parser.hpp"
#include "wgym/backend/browser.hpp"
#include "wgym/observation/observation.hpp"
#include "wgym/tasks/registry.hpp"

namespace wgym {

struct EnvConfig {
  std::string task_id;
  std::uint64_t seed = 0;
  int max_steps = 10;
  std::set<ActionCategory> action_subset = all_action_categories();
  int action_timeout_ms = 500;
  bool record_traces = false;

  // Throws ConfigError.
  void validate() const;
  bool operator==(const EnvConfig&) const = default;
};

using InfoMap = std::map<std::string, std::string>;

struct StepResult {
  Observation observation;
  double reward = 0;
  bool terminated = false;
  bool truncated = false;
  InfoMap info;
};

struct Episode {
  EnvConfig config;
  int step_index = 0;
  std::vector<ChatMessage> chat;
  bool done = false;
  double cumulative_reward = 0;
};

// One step as seen by the environment; the study layer adds agent data.
struct StepTrace {
  int step = 0;
  std::string action_text;
  // Canonical text of the parsed action; empty when parsing failed.
  std::string parsed_action;
  std::string axtree_text;
  std::string html_text;
  double reward = 0;
  bool terminated = false;
  bool truncated = false;
  std::string error;
  double wall_ms = 0;
};

void to_json(nlohmann::json& j, const StepTrace& t);
void from_json(const nlohmann::json& j, StepTrace& t);

class Environment {
 public:
  using TraceSink = std::function<void(const StepTrace&)>;

  Environment(EnvConfig config, TaskFactory factory);

  // Builds a fresh browser, runs the task setup and injects the goal into
  // the chat. Re-resetting abandons the current episode. A task failure is
  // raised as SetupError; a backend fault stays a BackendFailure.
  std::pair<Observation, InfoMap> reset(std::uint64_t seed);
  std::pair<Observation, InfoMap> reset() { return reset(episode_.config.seed); }

  // Action and parse failures come back in observation.last_action_error.
  // Throws UsageError before reset or after the episode ended.
  StepResult step(std::string_view action_text);

  void send_user_message(std::string text);

  const Episode& episode() const { return episode_; }
  const EnvConfig& config() const { return episode_.config; }
  const ActionSet& action_set() const { return action_set_; }
  bool is_reset() const { return browser_ != nullptr; }
  const Goal& goal() const { return goal_; }
  // The most recent observation (after reset or the last step).
  const Observation& observation() const;

  // Valid after reset.
  SimBrowser& browser();
  const Task& task() const;

  // Applied to every browser this environment creates.
  void set_fixtures(std::shared_ptr<FixtureStore> fixtures) { fixtures_ = std::move(fixtures); }
  void set_fault_hook(SimBrowser::FaultHook hook) { fault_hook_ = std::move(hook); }
  void set_trace_sink(TraceSink sink) { trace_sink_ = std::move(sink); }

 private:
  Observation observe();

  TaskFactory factory_;
  ActionSet action_set_;
  Episode episode_;
  Goal goal_;
  std::unique_ptr<Task> task_;
  std::unique_ptr<SimBrowser> browser_;
  std::shared_ptr<FixtureStore> fixtures_;
  SimBrowser::FaultHook fault_hook_;
  TraceSink trace_sink_;
  std::string last_error_;
  std::optional<Observation> last_obs_;
};

// Un-reset environment for a registered task. Unknown ids raise
// RegistrationError naming the id.
std::unique_ptr<Environment> make_env(const std::string& task_id, EnvConfig config = {},
                                      const TaskRegistry& registry = TaskRegistry::global());

}  // namespace wgym
