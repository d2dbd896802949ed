#include "wgym/agent/agent_args.hpp"

#include <charconv>
#include <sstream>
#include <utility>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "wgym/agent/builtin_agents.hpp"
#include "wgym/common/errors.hpp"
#include "wgym/tasks/benchmark.hpp"

namespace wgym {

namespace {

using ObsBool = bool ObsFlags::*;
using FlagBool = bool GenericFlags::*;

const std::vector<std::pair<const char*, ObsBool>> kObsBools = {
    {"use_html", &ObsFlags::use_html},
    {"use_axtree", &ObsFlags::use_axtree},
    {"use_tabs", &ObsFlags::use_tabs},
    {"use_focused_element", &ObsFlags::use_focused_element},
    {"use_error_logs", &ObsFlags::use_error_logs},
    {"use_history", &ObsFlags::use_history},
    {"use_past_error_logs", &ObsFlags::use_past_error_logs},
    {"use_action_history", &ObsFlags::use_action_history},
    {"use_think_history", &ObsFlags::use_think_history},
    {"use_screenshot", &ObsFlags::use_screenshot},
    {"use_som", &ObsFlags::use_som},
    {"extract_visible_tag", &ObsFlags::extract_visible_tag},
    {"extract_clickable_tag", &ObsFlags::extract_clickable_tag},
    {"extract_coords", &ObsFlags::extract_coords},
    {"filter_visible_elements_only", &ObsFlags::filter_visible_elements_only},
    {"filter_with_bid_only", &ObsFlags::filter_with_bid_only},
    {"filter_som_only", &ObsFlags::filter_som_only},
};

const std::vector<std::pair<const char*, FlagBool>> kFlagBools = {
    {"use_thinking", &GenericFlags::use_thinking},
    {"use_plan", &GenericFlags::use_plan},
    {"use_criticize", &GenericFlags::use_criticize},
    {"use_concrete_example", &GenericFlags::use_concrete_example},
    {"use_abstract_example", &GenericFlags::use_abstract_example},
};

std::string b2s(bool b) { return b ? "true" : "false"; }

bool s2b(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, v));
}

template <typename T>
T s2num(const std::string& key, const std::string& v) {
  T out{};
  if constexpr (std::is_floating_point_v<T>) {
    try {
      std::size_t used = 0;
      out = static_cast<T>(std::stod(v, &used));
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, v));
    }
  } else {
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, v));
    }
  }
  return out;
}

std::string num2s(double d) { return fmt::format("{}", d); }

}  // namespace

std::string_view to_string(AgentKind k) {
  switch (k) {
    case AgentKind::generic:
      return "generic";
    case AgentKind::oracle:
      return "oracle";
    case AgentKind::random:
      return "random";
  }
  return "";
}

AgentKind agent_kind_from_string(std::string_view name) {
  if (name == "generic") return AgentKind::generic;
  if (name == "oracle") return AgentKind::oracle;
  if (name == "random") return AgentKind::random;
  throw ConfigError(fmt::format("unknown agent kind '{}'", name));
}

void AgentArgs::validate() const {
  if (agent_name.empty()) throw ConfigError("agent_name must not be empty");
  if (kind == AgentKind::generic) {
    flags.validate();
    model.validate();
  }
}

void AgentArgs::set_benchmark(const Benchmark& benchmark) {
  flags.set_benchmark(benchmark.name);
  if (!benchmark.suggested_action_categories.empty()) {
    flags.action.action_categories = benchmark.suggested_action_categories;
  }
}

std::unique_ptr<Agent> AgentArgs::make_agent() const {
  validate();
  switch (kind) {
    case AgentKind::generic:
      return std::make_unique<GenericAgent>(flags, make_model(model));
    case AgentKind::oracle:
      return std::make_unique<OracleAgent>();
    case AgentKind::random:
      return std::make_unique<RandomAgent>(random_seed);
  }
  throw ConfigError("unknown agent kind");
}

FlatMap AgentArgs::to_flat() const {
  FlatMap m;
  m["kind"] = std::string(to_string(kind));
  m["agent_name"] = agent_name;
  m["random_seed"] = std::to_string(random_seed);
  for (const auto& [k, p] : kObsBools) m[std::string("flags.obs.") + k] = b2s(flags.obs.*p);
  std::vector<std::string> cats;
  for (auto c : flags.action.action_categories) cats.emplace_back(to_string(c));
  m["flags.action.action_categories"] = fmt::format("{}", fmt::join(cats, ","));
  m["flags.action.long_description"] = b2s(flags.action.long_description);
  m["flags.action.individual_examples"] = b2s(flags.action.individual_examples);
  m["flags.action.multi_actions"] = b2s(flags.action.multi_actions);
  for (const auto& [k, p] : kFlagBools) m[std::string("flags.") + k] = b2s(flags.*p);
  m["flags.extra_instructions"] = flags.extra_instructions;
  m["flags.max_prompt_tokens"] = std::to_string(flags.max_prompt_tokens);
  m["model.model_name"] = model.model_name;
  m["model.endpoint"] = model.endpoint;
  m["model.temperature"] = num2s(model.temperature);
  m["model.max_new_tokens"] = std::to_string(model.max_new_tokens);
  m["model.price_per_1k_prompt"] = num2s(model.price_per_1k_prompt);
  m["model.price_per_1k_completion"] = num2s(model.price_per_1k_completion);
  m["model.request_timeout_ms"] = std::to_string(model.request_timeout_ms);
  m["model.max_transport_retries"] = std::to_string(model.max_transport_retries);
  return m;
}

AgentArgs AgentArgs::from_flat(const FlatMap& flat) {
  AgentArgs a;
  for (const auto& [key, v] : flat) {
    bool handled = true;
    if (key == "kind") {
      a.kind = agent_kind_from_string(v);
    } else if (key == "agent_name") {
      a.agent_name = v;
    } else if (key == "random_seed") {
      a.random_seed = s2num<std::uint64_t>(key, v);
    } else if (key == "flags.action.action_categories") {
      a.flags.action.action_categories.clear();
      std::istringstream in(v);
      std::string item;
      while (std::getline(in, item, ',')) {
        if (!item.empty()) a.flags.action.action_categories.insert(action_category_from_string(item));
      }
    } else if (key == "flags.action.long_description") {
      a.flags.action.long_description = s2b(key, v);
    } else if (key == "flags.action.individual_examples") {
      a.flags.action.individual_examples = s2b(key, v);
    } else if (key == "flags.action.multi_actions") {
      a.flags.action.multi_actions = s2b(key, v);
    } else if (key == "flags.extra_instructions") {
      a.flags.extra_instructions = v;
    } else if (key == "flags.max_prompt_tokens") {
      a.flags.max_prompt_tokens = s2num<std::size_t>(key, v);
    } else if (key == "model.model_name") {
      a.model.model_name = v;
    } else if (key == "model.endpoint") {
      a.model.endpoint = v;
    } else if (key == "model.temperature") {
      a.model.temperature = s2num<double>(key, v);
    } else if (key == "model.max_new_tokens") {
      a.model.max_new_tokens = s2num<int>(key, v);
    } else if (key == "model.price_per_1k_prompt") {
      a.model.price_per_1k_prompt = s2num<double>(key, v);
    } else if (key == "model.price_per_1k_completion") {
      a.model.price_per_1k_completion = s2num<double>(key, v);
    } else if (key == "model.request_timeout_ms") {
      a.model.request_timeout_ms = s2num<int>(key, v);
    } else if (key == "model.max_transport_retries") {
      a.model.max_transport_retries = s2num<int>(key, v);
    } else {
      handled = false;
    }
    if (handled) continue;
    for (const auto& [k, p] : kObsBools) {
      if (key == std::string("flags.obs.") + k) {
        a.flags.obs.*p = s2b(key, v);
        handled = true;
      }
    }
    for (const auto& [k, p] : kFlagBools) {
      if (key == std::string("flags.") + k) {
        a.flags.*p = s2b(key, v);
        handled = true;
      }
    }
    if (!handled) throw ConfigError(fmt::format("unknown agent argument '{}'", key));
  }
  return a;
}

AgentArgs oracle_agent_args() {
  AgentArgs a;
  a.kind = AgentKind::oracle;
  a.agent_name = "OracleAgent";
  return a;
}

AgentArgs random_agent_args(std::uint64_t seed) {
  AgentArgs a;
  a.kind = AgentKind::random;
  a.agent_name = "RandomAgent";
  a.random_seed = seed;
  return a;
}

AgentArgs generic_agent_args(const std::string& model_name) {
  AgentArgs a;
  a.agent_name = "GenericAgent-" + model_name;
  a.model.model_name = model_name;
  return a;
}

void to_json(nlohmann::json& j, const AgentArgs& a) { j = a.to_flat(); }

void from_json(const nlohmann::json& j, AgentArgs& a) {
  a = AgentArgs::from_flat(j.get<FlatMap>());
}

}  // namespace wgym
