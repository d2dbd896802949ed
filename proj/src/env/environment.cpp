#include "wgym/env/environment.hpp"

#include <chrono>

#include <fmt/format.h>

#include "wgym/actions/mapping.hpp"
#include "wgym/common/errors.hpp"
#include "wgym/observation/flatten.hpp"

namespace wgym {

namespace {

ActionSetConfig action_config(const EnvConfig& c) {
  c.validate();
  ActionSetConfig a;
  a.enabled_categories = c.action_subset;
  return a;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

void EnvConfig::validate() const {
  if (max_steps < 1) throw ConfigError("max_steps must be >= 1");
  if (action_subset.empty()) throw ConfigError("action_subset must not be empty");
  if (action_timeout_ms <= 0) throw ConfigError("action_timeout_ms must be > 0");
}

void to_json(nlohmann::json& j, const StepTrace& t) {
  j = nlohmann::json{{"step", t.step},
                     {"action_text", t.action_text},
                     {"parsed_action", t.parsed_action},
                     {"axtree_text", t.axtree_text},
                     {"html_text", t.html_text},
                     {"reward", t.reward},
                     {"terminated", t.terminated},
                     {"truncated", t.truncated},
                     {"error", t.error},
                     {"wall_ms", t.wall_ms}};
}

void from_json(const nlohmann::json& j, StepTrace& t) {
  t.step = j.at("step").get<int>();
  t.action_text = j.at("action_text").get<std::string>();
  t.parsed_action = j.at("parsed_action").get<std::string>();
  t.axtree_text = j.at("axtree_text").get<std::string>();
  t.html_text = j.at("html_text").get<std::string>();
  t.reward = j.at("reward").get<double>();
  t.terminated = j.at("terminated").get<bool>();
  t.truncated = j.at("truncated").get<bool>();
  t.error = j.at("error").get<std::string>();
  t.wall_ms = j.at("wall_ms").get<double>();
}

Environment::Environment(EnvConfig config, TaskFactory factory)
    : factory_(std::move(factory)), action_set_(action_config(config)) {
  episode_.config = std::move(config);
}

std::pair<Observation, InfoMap> Environment::reset(std::uint64_t seed) {
  episode_.config.seed = seed;
  episode_.step_index = 0;
  episode_.chat.clear();
  episode_.done = false;
  episode_.cumulative_reward = 0;
  last_error_.clear();
  last_obs_.reset();
  browser_.reset();
  task_.reset();

  auto browser = std::make_unique<SimBrowser>(seed);
  if (fixtures_) browser->set_fixtures(fixtures_);
  if (fault_hook_) browser->set_fault_hook(fault_hook_);
  auto task = factory_();
  try {
    goal_ = task->setup(*browser, seed);
  } catch (const SetupError&) {
    throw;
  } catch (const BackendFailure&) {
    throw;
  } catch (const std::exception& e) {
    throw SetupError(fmt::format("setup of {} failed: {}", episode_.config.task_id, e.what()));
  }
  if (goal_.empty()) {
    throw SetupError(fmt::format("setup of {} returned an empty goal", episode_.config.task_id));
  }
  browser_ = std::move(browser);
  task_ = std::move(task);
  episode_.chat.push_back(ChatMessage::make(ChatRole::user, goal_));
  InfoMap info{{"task_id", episode_.config.task_id}, {"seed", std::to_string(seed)}};
  return {observe(), std::move(info)};
}

Observation Environment::observe() {
  last_obs_ = build_observation(*browser_, goal_, episode_.chat, last_error_);
  return *last_obs_;
}

const Observation& Environment::observation() const {
  if (!last_obs_) throw UsageError("environment has not been reset");
  return *last_obs_;
}

SimBrowser& Environment::browser() {
  if (!browser_) throw UsageError("environment has not been reset");
  return *browser_;
}

const Task& Environment::task() const {
  if (!task_) throw UsageError("environment has not been reset");
  return *task_;
}

StepResult Environment::step(std::string_view action_text) {
  if (!browser_) throw UsageError("step called before reset");
  if (episode_.done) throw UsageError("step called on a finished episode");
  const auto started = std::chrono::steady_clock::now();

  last_error_.clear();
  bool termination_requested = false;
  std::string canonical;
  auto parsed = action_set_.parse(action_text);
  if (auto* err = std::get_if<ParseError>(&parsed)) {
    last_error_ = err->message;
  } else {
    const auto& action = std::get<ParsedAction>(parsed);
    canonical = canonical_text(action);
    for (const auto& command : map_to_commands(action)) {
      bool stop = false;
      std::visit(overloaded{
                     [&](const cmd::AppendChat& c) {
                       episode_.chat.push_back(ChatMessage::text(c.role, c.text));
                     },
                     [&](const cmd::RequestTermination&) { termination_requested = true; },
                     [&](const auto&) {
                       if (auto e = browser_->execute(command, episode_.config.action_timeout_ms)) {
                         last_error_ = e->message;
                         stop = true;
                       }
                     },
                 },
                 command);
      if (stop) break;
    }
  }

  ++episode_.step_index;
  const Validation v = task_->validate(*browser_, episode_.chat);
  if (v.message && !v.message->empty()) {
    episode_.chat.push_back(ChatMessage::text(ChatRole::user_feedback, *v.message));
  }

  StepResult result;
  result.reward = v.reward;
  result.terminated = v.done || termination_requested;
  result.truncated = episode_.step_index == episode_.config.max_steps;
  episode_.cumulative_reward += v.reward;
  episode_.done = result.terminated || result.truncated;
  result.observation = observe();
  result.info = {{"step", std::to_string(episode_.step_index)},
                 {"action", canonical},
                 {"error", last_error_}};
  if (v.message) result.info["task_message"] = *v.message;

  if (episode_.config.record_traces && trace_sink_) {
    StepTrace t;
    t.step = episode_.step_index;
    t.action_text = std::string(action_text);
    t.parsed_action = canonical;
    t.axtree_text = flatten_axtree(result.observation.axtree);
    t.html_text = flatten_html(result.observation.dom);
    t.reward = result.reward;
    t.terminated = result.terminated;
    t.truncated = result.truncated;
    t.error = last_error_;
    t.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          started)
                    .count();
    trace_sink_(t);
  }
  return result;
}

void Environment::send_user_message(std::string text) {
  if (!browser_) throw UsageError("send_user_message called before reset");
  episode_.chat.push_back(ChatMessage::text(ChatRole::user, std::move(text)));
  if (last_obs_) last_obs_->chat_messages = episode_.chat;
}

std::unique_ptr<Environment> make_env(const std::string& task_id, EnvConfig config,
                                      const TaskRegistry& registry) {
  if (!registry.contains(task_id)) throw RegistrationError("unknown task: " + task_id);
  config.task_id = task_id;
  return std::make_unique<Environment>(
      std::move(config), [&registry, task_id] { return registry.create(task_id); });
}

}  // namespace wgym
