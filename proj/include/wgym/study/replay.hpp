#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgym/study/study.hpp"

namespace wgym {

struct StepDiff {
  int step = 0;
  std::string prompt_diff;
  std::string axtree_diff;
  std::string html_diff;
  std::string action_recorded;
  std::string action_replayed;

  bool empty() const {
    return prompt_diff.empty() && axtree_diff.empty() && html_diff.empty() &&
           action_recorded == action_replayed;
  }
};

struct ReplayReport {
  std::string episode_id;
  std::vector<StepDiff> steps;
  // First step whose prompt, observation or action differs.
  std::optional<int> first_difference;
  // Step where replay could not go on (recorded action no longer valid,
  // episode ended early), with the reason.
  std::optional<int> divergence_step;
  std::string divergence_reason;
  int recorded_steps = 0;

  bool reproduced() const { return !first_difference && !divergence_step; }
};

nlohmann::json to_json(const ReplayReport& report);

// Re-runs the newest attempt of an episode on the same task and seed. The
// generic agent is rebuilt with its original flags and fed the recorded
// completions, so prompts are recomputed rather than copied; other agents
// replay the recorded actions. Throws ConfigError when the step log is
// missing.
ReplayReport replay_episode(const Study& study, const EpisodeSpec& spec);
// `selector` is an episode id, "agent_<k>:<task>.<seed>.<attempt>" or
// "<task>.<seed>" (newest attempt of agent 0).
ReplayReport replay_episode(const Study& study, const std::string& selector);
std::vector<ReplayReport> replay_study(const Study& study);

// The assistant completions of one step record, in call order.
std::vector<std::string> recorded_completions(const nlohmann::json& step_record);
// The user prompt of a step record ("" for agents without one).
std::string recorded_prompt(const nlohmann::json& step_record);

}  // namespace wgym
