#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "wgym/actions/parser.hpp"
#include "wgym/agent/agent.hpp"
#include "wgym/agent/prompt.hpp"
#include "wgym/llm/model.hpp"

namespace wgym {

struct ObsFlags {
  bool use_html = false;
  bool use_axtree = true;
  bool use_tabs = true;
  bool use_focused_element = true;
  bool use_error_logs = true;
  bool use_history = true;
  bool use_past_error_logs = false;
  bool use_action_history = true;
  bool use_think_history = true;
  bool use_screenshot = false;
  bool use_som = false;
  bool extract_visible_tag = true;
  bool extract_clickable_tag = true;
  bool extract_coords = false;
  bool filter_visible_elements_only = false;
  bool filter_with_bid_only = false;
  bool filter_som_only = false;

  bool operator==(const ObsFlags&) const = default;
};

struct ActionFlags {
  std::set<ActionCategory> action_categories = {ActionCategory::bid, ActionCategory::misc,
                                                ActionCategory::tab, ActionCategory::nav};
  bool long_description = false;
  bool individual_examples = false;
  bool multi_actions = false;

  ActionSetConfig action_set_config() const;
  bool operator==(const ActionFlags&) const = default;
};

struct GenericFlags {
  ObsFlags obs;
  ActionFlags action;
  bool use_thinking = true;
  bool use_plan = false;
  bool use_criticize = false;
  bool use_concrete_example = true;
  bool use_abstract_example = true;
  std::string extra_instructions;
  std::size_t max_prompt_tokens = 40000;

  // Throws ConfigError for combinations this version cannot run: vision
  // flags, multiple actions, planning and criticism.
  void validate() const;
  // Benchmark-specific adjustments; miniwob pages are small enough for HTML.
  void set_benchmark(const std::string& benchmark_name);
  bool operator==(const GenericFlags&) const = default;
};

// One past step as remembered by the agent.
struct HistoryStep {
  std::string think;
  std::string action;
  // Error reported by the environment after this action, if any.
  std::string error;
};

// Observation fields the prompt needs, as a JSON object: goal, goal_images,
// chat, tabs, active_tab, axtree_txt (if use_axtree), html_txt (if
// use_html), focused_element_bid, last_action_error.
ProcessedObs generic_preprocess(const ObsFlags& flags, const Observation& obs);

// Components in prompt order. Shrink priorities: history 0, HTML 1,
// AXTree 2; everything else never shrinks.
std::vector<PromptComponent> build_generic_prompt(const GenericFlags& flags,
                                                  const ProcessedObs& obs,
                                                  const std::vector<HistoryStep>& history);

const std::string& generic_system_message();

// Model calls per step before the step is declared failed.
inline constexpr int kMaxAnswerAttempts = 4;

class GenericAgent : public Agent {
 public:
  GenericAgent(GenericFlags flags, std::unique_ptr<ChatModel> model,
               TokenCounter counter = default_token_counter());

  void begin_episode(const EpisodeContext& ctx) override;
  ProcessedObs obs_preprocessor(const Observation& obs) override;
  AgentStep get_action(const ProcessedObs& obs) override;

  const GenericFlags& flags() const { return flags_; }
  const std::vector<HistoryStep>& history() const { return history_; }

 private:
  GenericFlags flags_;
  std::unique_ptr<ChatModel> model_;
  TokenCounter counter_;
  ActionSet action_set_;
  std::vector<HistoryStep> history_;
};

}  // namespace wgym
