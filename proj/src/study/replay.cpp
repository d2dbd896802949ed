#include "wgym/study/replay.hpp"

#include <fmt/format.h>

#include "wgym/agent/builtin_agents.hpp"
#include "wgym/agent/generic_agent.hpp"
#include "wgym/common/errors.hpp"
#include "wgym/env/environment.hpp"
#include "wgym/llm/scripted.hpp"
#include "wgym/observation/flatten.hpp"
#include "wgym/study/diff.hpp"
#include "wgym/study/runner.hpp"

namespace wgym {

std::vector<std::string> recorded_completions(const nlohmann::json& rec) {
  std::vector<std::string> out;
  if (!rec.contains("agent_info")) return out;
  for (const auto& m : rec["agent_info"].value("chat_messages", nlohmann::json::array())) {
    if (m.value("role", "") == "assistant") out.push_back(m.value("content", ""));
  }
  return out;
}

std::string recorded_prompt(const nlohmann::json& rec) {
  if (!rec.contains("agent_info")) return {};
  const auto msgs = rec["agent_info"].value("chat_messages", nlohmann::json::array());
  for (const auto& m : msgs) {
    if (m.value("role", "") == "user") return m.value("content", "");
  }
  return {};
}

nlohmann::json to_json(const ReplayReport& r) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"step", s.step},
                     {"prompt_diff", s.prompt_diff},
                     {"axtree_diff", s.axtree_diff},
                     {"html_diff", s.html_diff},
                     {"action_recorded", s.action_recorded},
                     {"action_replayed", s.action_replayed}});
  }
  nlohmann::json j = {{"episode_id", r.episode_id},
                      {"reproduced", r.reproduced()},
                      {"recorded_steps", r.recorded_steps},
                      {"steps", steps}};
  j["first_difference"] = r.first_difference ? nlohmann::json(*r.first_difference) : nlohmann::json();
  j["divergence_step"] = r.divergence_step ? nlohmann::json(*r.divergence_step) : nlohmann::json();
  j["divergence_reason"] = r.divergence_reason;
  return j;
}

ReplayReport replay_episode(const Study& study, const EpisodeSpec& spec) {
  ReplayReport report;
  report.episode_id = study.episode_id(spec);
  const auto dir = study.episode_dir(spec);
  std::vector<nlohmann::json> records;
  try {
    records = read_step_log(dir);
  } catch (const ConfigError&) {
    throw ConfigError(fmt::format("episode {} has no step log to replay", report.episode_id));
  }
  report.recorded_steps = static_cast<int>(records.size());

  const AgentArgs& args = study.agent_args_list.at(static_cast<std::size_t>(spec.agent_index));
  std::unique_ptr<Agent> agent;
  if (args.kind == AgentKind::generic) {
    std::vector<ScriptRule> script;
    for (const auto& rec : records) {
      for (auto& c : recorded_completions(rec)) script.push_back({std::nullopt, std::move(c)});
    }
    agent = std::make_unique<GenericAgent>(
        args.flags, std::make_unique<ScriptedModel>(std::move(script), args.model));
  } else {
    std::vector<std::string> actions;
    for (const auto& rec : records) actions.push_back(rec.value("action", ""));
    agent = std::make_unique<ReplayAgent>(std::move(actions));
  }

  auto fixtures = std::make_shared<FixtureStore>();
  prepare_backend(study.benchmark, *fixtures);
  EnvConfig cfg;
  cfg.max_steps = spec.max_steps;
  cfg.action_subset = study.benchmark.suggested_action_categories;
  auto env = make_env(spec.task_id, cfg);
  env->set_fixtures(fixtures);
  env->reset(spec.seed);
  EpisodeContext ctx;
  ctx.task_id = spec.task_id;
  ctx.seed = spec.seed;
  ctx.benchmark = study.benchmark.name;
  ctx.action_categories = cfg.action_subset;
  ctx.task = &env->task();
  agent->begin_episode(ctx);

  auto mark = [&](int step, std::string reason) {
    report.divergence_step = step;
    report.divergence_reason = std::move(reason);
  };

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const int step = static_cast<int>(i);
    for (const auto& m : rec.value("injected_messages", nlohmann::json::array())) {
      env->send_user_message(m.get<std::string>());
    }
    const Observation& obs = env->observation();
    const ProcessedObs pobs = agent->obs_preprocessor(obs);
    StepDiff d;
    d.step = step;
    d.axtree_diff = unified_diff(rec.value("axtree_txt", ""), flatten_axtree(obs.axtree),
                                 "recorded/axtree", "replayed/axtree");
    d.html_diff = unified_diff(rec.value("html_txt", ""), flatten_html(obs.dom), "recorded/html",
                               "replayed/html");
    AgentStep a;
    try {
      a = agent->get_action(pobs);
    } catch (const ScriptExhausted&) {
      d.action_recorded = rec.value("action", "");
      report.steps.push_back(d);
      if (!report.first_difference) report.first_difference = step;
      mark(step, "the replayed agent asked for more completions than were recorded");
      break;
    }
    d.prompt_diff = unified_diff(recorded_prompt(rec), a.info.chat_messages.size() > 1
                                                           ? a.info.chat_messages[1].content
                                                           : std::string(),
                                 "recorded/prompt", "replayed/prompt");
    d.action_recorded = rec.value("action", "");
    d.action_replayed = a.action;
    const bool differs = !d.empty();
    report.steps.push_back(d);
    if (differs && !report.first_difference) report.first_difference = step;

    if (a.failed != rec.value("failed", false)) {
      mark(step, "agent failure differs from the recording");
      break;
    }
    if (a.failed) break;
    StepResult r = env->step(a.action);
    const std::string recorded_error = rec.value("error", "");
    const std::string& now_error = r.observation.last_action_error;
    if (!now_error.empty() && recorded_error.empty()) {
      mark(step, "recorded action is no longer valid: " + now_error);
      break;
    }
    const bool ended = r.terminated || r.truncated;
    const bool was_last = i + 1 == records.size();
    if (ended && !was_last) {
      mark(step, "episode ended earlier than in the recording");
      break;
    }
    if (!ended && was_last && !rec.value("failed", false)) {
      // The original stopped here (interrupted or ended); nothing to compare.
      break;
    }
  }
  return report;
}

ReplayReport replay_episode(const Study& study, const std::string& selector) {
  for (const auto& rec : episode_records(study)) {
    const auto& s = rec.spec;
    const std::string full = study.episode_id(s);
    const std::string local = fmt::format("agent_{}:{}", s.agent_index, s.dir_name());
    const bool short_match = s.agent_index == 0 && selector == s.key();
    if (selector == full || selector == local || short_match) return replay_episode(study, s);
  }
  throw ConfigError(fmt::format("no episode matches '{}' in study {}", selector, study.id));
}

std::vector<ReplayReport> replay_study(const Study& study) {
  std::vector<ReplayReport> out;
  for (const auto& rec : episode_records(study)) {
    if (!rec.result || rec.result->status == EpisodeStatus::error) continue;
    out.push_back(replay_episode(study, rec.spec));
  }
  return out;
}

}  // namespace wgym
