#include "wgym/agent/builtin_agents.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "wgym/common/errors.hpp"
#include "wgym/common/rng.hpp"
#include "wgym/tasks/task.hpp"

namespace wgym {

namespace {

const std::vector<std::string> kWords = {"hello", "submit", "42", "blue", "2024", "yes",
                                         "http://example.com", "Enter", "a"};

AgentStep exhausted(const char* who) {
  AgentStep s;
  s.failed = true;
  s.info.extra["failure"] = fmt::format("{} has no actions left", who);
  return s;
}

}  // namespace

void OracleAgent::begin_episode(const EpisodeContext& ctx) {
  if (!ctx.task) throw UsageError("oracle agent needs the task in its episode context");
  actions_ = ctx.task->oracle_actions();
  next_ = 0;
}

ProcessedObs OracleAgent::obs_preprocessor(const Observation& obs) {
  return {{"last_action_error", obs.last_action_error}};
}

AgentStep OracleAgent::get_action(const ProcessedObs&) {
  if (next_ >= actions_.size()) return exhausted("oracle");
  AgentStep s;
  s.action = actions_[next_++];
  return s;
}

void RandomAgent::begin_episode(const EpisodeContext& ctx) {
  stream_key_ = "random-agent." + ctx.task_id;
  stream_seed_ = splitmix64(random_seed_ ^ splitmix64(ctx.seed));
  draws_ = 0;
  ActionSetConfig config;
  config.enabled_categories = ctx.action_categories;
  enabled_ = ActionSet(config).enabled();
}

ProcessedObs RandomAgent::obs_preprocessor(const Observation& obs) {
  nlohmann::json bids = nlohmann::json::array();
  for (const auto& [bid, props] : obs.extra_element_properties) bids.push_back(bid);
  return {{"bids", bids}, {"tabs", obs.open_pages_urls.size()}};
}

AgentStep RandomAgent::get_action(const ProcessedObs& obs) {
  if (enabled_.empty()) throw UsageError("random agent used before begin_episode");
  // One stream per step keeps each step's draw independent of the previous
  // steps' argument counts.
  SeededStream rng(stream_key_, stream_seed_ + draws_++);
  std::vector<std::string> bids;
  for (const auto& b : obs.value("bids", nlohmann::json::array())) bids.push_back(b.get<std::string>());
  if (bids.empty()) bids.push_back("0");
  const std::size_t tabs = obs.value("tabs", std::size_t{1});

  const ActionPrimitive* p = rng.pick(enabled_);
  std::vector<std::string> args;
  for (const auto& param : p->params) {
    if (!param.required()) continue;
    switch (param.type) {
      case ParamType::string:
        if (param.name.find("bid") != std::string::npos) {
          args.push_back(quote_arg(rng.pick(bids)));
        } else {
          args.push_back(quote_arg(rng.pick(kWords)));
        }
        break;
      case ParamType::string_or_list:
        args.push_back(quote_arg(rng.pick(kWords)));
        break;
      case ParamType::number:
        args.push_back(std::to_string(rng.between(-50, 800)));
        break;
      case ParamType::integer:
        args.push_back(std::to_string(rng.below(std::max<std::size_t>(tabs, 1) + 1)));
        break;
      case ParamType::mouse_button:
        args.push_back("'left'");
        break;
      case ParamType::modifier_list:
        args.push_back("[]");
        break;
    }
  }
  AgentStep s;
  s.action = fmt::format("{}({})", p->name, fmt::join(args, ", "));
  return s;
}

AgentStep ReplayAgent::get_action(const ProcessedObs&) {
  if (next_ >= actions_.size()) return exhausted("replay");
  AgentStep s;
  s.action = actions_[next_++];
  return s;
}

}  // namespace wgym
