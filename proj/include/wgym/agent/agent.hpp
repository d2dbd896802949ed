#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgym/actions/catalog.hpp"
#include "wgym/llm/model.hpp"
#include "wgym/llm/usage.hpp"
#include "wgym/observation/observation.hpp"
#include "wgym/tasks/task.hpp"

namespace wgym {

struct AgentInfo {
  std::string think;
  // The full prompt of the last model call, one entry per message.
  std::vector<LlmMessage> chat_messages;
  std::map<std::string, double> stats;
  Usage tokens;
  std::map<std::string, std::string> extra;
};

void to_json(nlohmann::json& j, const AgentInfo& info);
void from_json(const nlohmann::json& j, AgentInfo& info);

struct AgentStep {
  std::string action;
  AgentInfo info;
  // No usable action could be produced; the episode ends as a failure.
  bool failed = false;
};

// What an agent learns about the episode before its first step.
struct EpisodeContext {
  std::string task_id;
  std::uint64_t seed = 0;
  std::string benchmark;
  std::set<ActionCategory> action_categories = all_action_categories();
  // Only the oracle agent looks at this.
  const Task* task = nullptr;
};

// The processed observation is a JSON object so that agents can add or drop
// fields freely; it is what the trace store persists.
using ProcessedObs = nlohmann::json;

class Agent {
 public:
  virtual ~Agent() = default;

  virtual void begin_episode(const EpisodeContext&) {}
  // Default: the full observation serialized as JSON.
  virtual ProcessedObs obs_preprocessor(const Observation& obs);
  virtual AgentStep get_action(const ProcessedObs& obs) = 0;
};

}  // namespace wgym
