#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "wgym/agent/agent.hpp"
#include "wgym/agent/generic_agent.hpp"
#include "wgym/llm/model.hpp"

namespace wgym {

struct Benchmark;

enum class AgentKind { generic, oracle, random };

std::string_view to_string(AgentKind k);
// Throws ConfigError.
AgentKind agent_kind_from_string(std::string_view name);

using FlatMap = std::map<std::string, std::string>;

// Everything needed to rebuild an agent. One value may create many agents
// concurrently.
struct AgentArgs {
  AgentKind kind = AgentKind::generic;
  std::string agent_name = "GenericAgent";
  GenericFlags flags;
  ModelArgs model;
  std::uint64_t random_seed = 0;

  // Throws ConfigError.
  void validate() const;
  void set_benchmark(const Benchmark& benchmark);
  std::unique_ptr<Agent> make_agent() const;

  // Dotted keys ("flags.obs.use_html", "model.model_name") to strings.
  FlatMap to_flat() const;
  // Missing keys keep their defaults; unknown keys or bad values throw
  // ConfigError.
  static AgentArgs from_flat(const FlatMap& flat);

  bool operator==(const AgentArgs&) const = default;
};

AgentArgs oracle_agent_args();
AgentArgs random_agent_args(std::uint64_t seed = 0);
AgentArgs generic_agent_args(const std::string& model_name);

void to_json(nlohmann::json& j, const AgentArgs& a);
void from_json(const nlohmann::json& j, AgentArgs& a);

}  // namespace wgym
