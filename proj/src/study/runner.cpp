#include "wgym/study/runner.hpp"

#include <chrono>
#include <fstream>

#include <fmt/format.h>

#include "wgym/common/errors.hpp"
#include "wgym/env/environment.hpp"
#include "wgym/llm/model.hpp"
#include "wgym/observation/flatten.hpp"
#include "wgym/study/scheduler.hpp"

namespace wgym {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

nlohmann::json chat_json(const std::vector<ChatMessage>& chat) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& m : chat) out.push_back({{"role", to_string(m.role)}, {"text", m.text()}});
  return out;
}

std::string active_url(const Observation& obs) {
  if (obs.active_page_index < obs.open_pages_urls.size()) {
    return obs.open_pages_urls[obs.active_page_index];
  }
  return {};
}

}  // namespace

std::vector<nlohmann::json> read_step_log(const fs::path& episode_dir) {
  const fs::path p = episode_dir / kStepsFile;
  std::ifstream in(p);
  if (!in) throw ConfigError("no step log at " + p.string());
  std::vector<nlohmann::json> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception&) {
      // A torn last line from an interrupted run.
      break;
    }
  }
  return out;
}

EpisodeResult run_episode(const Study& study, const EpisodeSpec& spec,
                          const std::shared_ptr<FixtureStore>& fixtures,
                          const RunOptions& options) {
  const auto& hooks = options.hooks;
  const fs::path dir = study.episode_dir(spec);
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    nlohmann::json sj = {{"agent_index", spec.agent_index}, {"task_id", spec.task_id},
                         {"seed", spec.seed},               {"max_steps", spec.max_steps},
                         {"attempt", spec.attempt},         {"episode_id", study.episode_id(spec)}};
    write_json_atomic(dir / kSpecFile, sj);
  }
  if (hooks.on_start) hooks.on_start(spec);

  std::shared_ptr<LiveSession> live;
  if (options.live) live = options.live->open(study.episode_id(spec));

  std::ofstream log(dir / kStepsFile, std::ios::app);
  EpisodeResult result;
  const auto t0 = Clock::now();
  try {
    const AgentArgs& args = study.agent_args_list.at(static_cast<std::size_t>(spec.agent_index));
    std::unique_ptr<Agent> agent = hooks.make_agent ? hooks.make_agent(args, spec) : args.make_agent();
    EnvConfig cfg;
    cfg.max_steps = spec.max_steps;
    cfg.action_subset = study.benchmark.suggested_action_categories;
    auto env = make_env(spec.task_id, cfg);
    env->set_fixtures(fixtures);
    if (hooks.fault_hook) env->set_fault_hook(hooks.fault_hook(spec));
    env->reset(spec.seed);

    EpisodeContext ctx;
    ctx.task_id = spec.task_id;
    ctx.seed = spec.seed;
    ctx.benchmark = study.benchmark.name;
    ctx.action_categories = cfg.action_subset;
    ctx.task = &env->task();
    agent->begin_episode(ctx);
    std::size_t chat_seen = 0;
    auto publish_chat = [&] {
      if (!live) return;
      const auto& chat = env->episode().chat;
      for (; chat_seen < chat.size(); ++chat_seen) {
        live->publish("chat", {{"role", to_string(chat[chat_seen].role)},
                               {"text", chat[chat_seen].text()}});
      }
    };
    if (live) live->publish("reset", {{"goal", goal_text(env->goal())}, {"task_id", spec.task_id}});
    publish_chat();

    for (int step = 0;; ++step) {
      std::vector<std::string> injected;
      if (live) {
        injected = live->take_messages();
        for (const auto& text : injected) env->send_user_message(text);
        publish_chat();
      }
      const Observation& obs = env->observation();
      nlohmann::json rec;
      rec["step"] = step;
      rec["url"] = active_url(obs);
      rec["goal"] = goal_text(obs.goal_object);
      rec["chat"] = chat_json(obs.chat_messages);
      rec["injected_messages"] = injected;
      rec["axtree_txt"] = flatten_axtree(obs.axtree);
      rec["html_txt"] = flatten_html(obs.dom);
      rec["last_action_error"] = obs.last_action_error;
      const ProcessedObs pobs = agent->obs_preprocessor(obs);
      rec["obs"] = pobs;

      const auto a0 = Clock::now();
      AgentStep a = agent->get_action(pobs);
      rec["agent_ms"] = ms_since(a0);
      rec["action"] = a.action;
      rec["think"] = a.info.think;
      rec["failed"] = a.failed;
      rec["agent_info"] = a.info;
      result.usage += a.info.tokens;

      if (a.failed) {
        rec["reward"] = 0.0;
        rec["terminated"] = true;
        rec["truncated"] = false;
        rec["error"] = a.info.extra.count("failure") ? a.info.extra.at("failure") : "agent failed";
        log << rec.dump() << '\n';
        log.flush();
        if (hooks.on_step) hooks.on_step(spec, step);
        result.terminated = true;
        break;
      }

      const auto e0 = Clock::now();
      StepResult r = env->step(a.action);
      rec["env_ms"] = ms_since(e0);
      rec["reward"] = r.reward;
      rec["terminated"] = r.terminated;
      rec["truncated"] = r.truncated;
      rec["error"] = r.observation.last_action_error;
      log << rec.dump() << '\n';
      log.flush();
      result.n_steps = step + 1;
      if (live) {
        live->publish("step", {{"step", step},
                               {"action", a.action},
                               {"think", a.info.think},
                               {"reward", r.reward},
                               {"terminated", r.terminated},
                               {"truncated", r.truncated},
                               {"error", r.observation.last_action_error},
                               {"axtree_txt", flatten_axtree(r.observation.axtree)}});
        publish_chat();
      }
      if (hooks.on_step) hooks.on_step(spec, step);
      if (r.terminated || r.truncated) {
        result.terminated = r.terminated;
        result.truncated = r.truncated;
        break;
      }
    }
    result.reward = env->episode().cumulative_reward;
    result.status = result.reward >= 1.0 ? EpisodeStatus::success : EpisodeStatus::failure;
  } catch (const BackendFailure& e) {
    result.status = EpisodeStatus::error;
    result.error_message = fmt::format("backend failure: {}", e.what());
  } catch (const TransportError& e) {
    result.status = EpisodeStatus::error;
    result.error_message = fmt::format("transport error: {}", e.what());
  } catch (const SetupError& e) {
    result.status = EpisodeStatus::error;
    result.error_message = fmt::format("setup error: {}", e.what());
  } catch (const std::exception& e) {
    result.status = EpisodeStatus::error;
    result.error_message = fmt::format("worker error: {}", e.what());
  }
  if (result.status == EpisodeStatus::error) result.reward = 0;
  result.elapsed_ms = ms_since(t0);
  log.close();
  write_json_atomic(dir / kResultFile, result);
  if (live) live->end({{"status", to_string(result.status)}, {"reward", result.reward}});
  if (hooks.on_finish) hooks.on_finish(spec, result);
  return result;
}

RunSummary run_study(const Study& study, const RunOptions& options) {
  if (options.n_jobs < 1) throw ConfigError("n_jobs must be >= 1");
  if (options.max_relaunch_rounds < 0 || options.max_relaunch_rounds > kMaxRelaunches) {
    throw ConfigError(fmt::format("max_relaunch_rounds must be in [0, {}]", kMaxRelaunches));
  }
  RunSummary summary;
  for (int pass = 0; pass <= options.max_relaunch_rounds; ++pass) {
    const auto pending = find_incomplete(study, true);
    if (pending.empty()) break;
    ++summary.passes;
    for (std::size_t k = 0; k < study.agent_args_list.size(); ++k) {
      std::vector<EpisodeSpec> mine;
      for (const auto& e : pending) {
        if (e.agent_index == static_cast<int>(k)) mine.push_back(e);
      }
      if (mine.empty()) continue;
      auto fixtures = std::make_shared<FixtureStore>();
      prepare_backend(study.benchmark, *fixtures);
      std::vector<ScheduleItem> items;
      for (const auto& e : mine) items.push_back({e.task_id, e.seed});
      DagScheduler scheduler(std::move(items), study.benchmark.dependency_edges);
      run_scheduled(scheduler, options.n_jobs,
                    [&](std::size_t i) { run_episode(study, mine[i], fixtures, options); });
      summary.episodes_run += mine.size();
    }
  }
  for (const auto& rec : episode_records(study)) {
    if (rec.result && rec.result->status == EpisodeStatus::error) ++summary.errors_left;
  }
  return summary;
}

}  // namespace wgym
