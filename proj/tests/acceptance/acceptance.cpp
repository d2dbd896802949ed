// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fail.
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "support/test_support.hpp"
#include "wgym/actions/parser.hpp"
#include "wgym/agent/generic_agent.hpp"
#include "wgym/backend/browser.hpp"
#include "wgym/common/errors.hpp"
#include "wgym/common/rng.hpp"
#include "wgym/env/environment.hpp"
#include "wgym/llm/scripted.hpp"
#include "wgym/observation/flatten.hpp"
#include "wgym/observation/observation.hpp"
#include "wgym/study/replay.hpp"
#include "wgym/study/runner.hpp"
#include "wgym/study/scheduler.hpp"
#include "wgym/tasks/benchmark.hpp"
#include "wgym/tasks/examples.hpp"
#include "wgym/tasks/synthetic.hpp"

namespace {

using namespace wgym;
using Clock = std::chrono::steady_clock;
using wgym::testing::TempDir;

constexpr double kA1MaxSeconds = 1.0;
constexpr double kA2MaxSeconds = 60.0;
constexpr double kA2RandomMaxRate = 0.20;
constexpr int kA4Runs = 1000;
constexpr int kA7FuzzInputs = 10000;
constexpr double kA11Tolerance = 1e-12;
constexpr double kA12MaxSeconds = 120.0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  fmt::print("{} {} {}\n", ok ? "PASS" : "FAIL", id, detail);
  std::fflush(stdout);
  if (!ok) ++failures;
}

void criterion(const char* id, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    auto [ok, detail] = body();
    report(id, ok, detail);
  } catch (const std::exception& e) {
    report(id, false, fmt::format("exception: {}", e.what()));
  }
}

StudyOptions study_id(const std::string& id) {
  StudyOptions o;
  o.id = id;
  return o;
}

std::string strip_ms(EpisodeResult r) {
  r.elapsed_ms = 0;
  return nlohmann::json(r).dump();
}

std::pair<bool, std::string> a1() {
  const auto t0 = Clock::now();
  auto manifest = load_benchmark(wgym::testing::source_path("benchmarks/miniwob-shape.json"));
  const auto big = benchmark_episodes(manifest, 5).size();
  const auto small = benchmark_episodes(synthetic_benchmark(), 5).size();
  const double s = seconds_since(t0);
  return {manifest.tasks.size() == 125 && big == 625 && small == 50 && s < kA1MaxSeconds,
          fmt::format("templates={} episodes={} synthetic={} in {:.3f}s (limit {}s)",
                      manifest.tasks.size(), big, small, s, kA1MaxSeconds)};
}

struct Shared {
  TempDir dir;
  std::optional<Study> oracle;
  std::optional<Study> random;
  std::optional<Study> heuristic;
};

std::pair<bool, std::string> a2(Shared& sh) {
  const auto t0 = Clock::now();
  sh.oracle = make_study(synthetic_benchmark(), {oracle_agent_args()}, "", sh.dir.path(),
                         study_id("oracle"));
  sh.random = make_study(synthetic_benchmark(), {random_agent_args(0)}, "", sh.dir.path(),
                         study_id("random"));
  run_study(*sh.oracle, RunOptions{.n_jobs = 4});
  run_study(*sh.random, RunOptions{.n_jobs = 4});
  const double s = seconds_since(t0);
  const auto mo = aggregate(*sh.oracle).at(0);
  const auto mr = aggregate(*sh.random).at(0);
  const bool ok = mo.overall.n == 50 && mo.overall.success_rate == 1.0 && mr.overall.n == 50 &&
                  mr.overall.success_rate <= kA2RandomMaxRate && s < kA2MaxSeconds;
  return {ok, fmt::format("oracle={:.2f} (n={}) random={:.2f} (n={}, limit {:.2f}) in {:.1f}s",
                          mo.overall.success_rate, mo.overall.n, mr.overall.success_rate,
                          mr.overall.n, kA2RandomMaxRate, s)};
}

std::pair<bool, std::string> a3(Shared& sh) {
  const std::vector<AgentArgs> agents = {random_agent_args(7),
                                         generic_agent_args("scripted:heuristic")};
  auto seq = make_study(synthetic_benchmark(), agents, "", sh.dir.path(), study_id("jobs1"));
  auto par = make_study(synthetic_benchmark(), agents, "", sh.dir.path(), study_id("jobs8"));
  run_study(seq, RunOptions{.n_jobs = 1});
  run_study(par, RunOptions{.n_jobs = 8});
  auto rs = episode_records(seq);
  auto rp = episode_records(par);
  std::size_t mismatches = rs.size() == rp.size() ? 0 : 1;
  for (std::size_t i = 0; i < std::min(rs.size(), rp.size()); ++i) {
    if (!rs[i].result || !rp[i].result || strip_ms(*rs[i].result) != strip_ms(*rp[i].result)) {
      ++mismatches;
    }
  }
  const bool metrics_equal = aggregate(seq) == aggregate(par);
  sh.heuristic = seq;
  return {mismatches == 0 && metrics_equal && rs.size() == 100,
          fmt::format("{} episodes, {} mismatches, metrics {}", rs.size(), mismatches,
                      metrics_equal ? "equal" : "differ")};
}

std::pair<bool, std::string> a4() {
  const std::vector<std::pair<std::string, std::string>> edges = {
      {"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}};
  std::size_t violations = 0;
  for (int run = 0; run < kA4Runs; ++run) {
    SeededStream rng("diamond-acceptance", static_cast<std::uint64_t>(run));
    const int seeds = static_cast<int>(rng.between(1, 3));
    std::vector<ScheduleItem> items;
    for (const char* t : {"d", "c", "b", "a"}) {
      for (int s = 0; s < seeds; ++s) items.push_back({t, static_cast<std::uint64_t>(s)});
    }
    std::vector<bool> slow;
    for (std::size_t i = 0; i < items.size(); ++i) slow.push_back(rng.below(4) == 0);
    DagScheduler sched(items, edges);
    std::mutex mu;
    std::map<std::string, int> done;
    run_scheduled(sched, static_cast<int>(rng.between(1, 8)), [&](std::size_t i) {
      const std::string t = sched.item(i).task_id;
      {
        std::lock_guard lk(mu);
        for (const auto& [from, to] : edges) {
          if (to == t && done[from] != seeds) ++violations;
        }
      }
      if (slow[i]) std::this_thread::sleep_for(std::chrono::microseconds(200));
      std::lock_guard lk(mu);
      ++done[t];
    });
    if (!sched.done()) ++violations;
  }
  return {violations == 0, fmt::format("{} runs, {} partial-order violations", kA4Runs, violations)};
}

std::pair<bool, std::string> a5(Shared& sh) {
  auto s = make_study(synthetic_benchmark(), {oracle_agent_args()}, "", sh.dir.path(),
                      study_id("faults"));
  RunOptions opt;
  opt.n_jobs = 4;
  opt.hooks.fault_hook = [](const EpisodeSpec& spec) -> SimBrowser::FaultHook {
    if (spec.attempt >= 2) return {};
    return [](const BackendCommand&) { throw BackendFailure("injected fault"); };
  };
  run_study(s, opt);
  std::size_t ok = 0;
  int max_attempt = 0;
  for (const auto& rec : episode_records(s)) {
    if (rec.result && rec.result->status == EpisodeStatus::success) ++ok;
    max_attempt = std::max(max_attempt, rec.spec.attempt);
  }
  return {ok == 50 && max_attempt + 1 <= 4,
          fmt::format("{}/50 succeeded, max attempts used {}", ok, max_attempt + 1)};
}

std::unique_ptr<ScriptedModel> queue_model(std::vector<std::string> responses) {
  std::vector<ScriptRule> rules;
  for (auto& r : responses) rules.push_back({std::nullopt, std::move(r)});
  return std::make_unique<ScriptedModel>(std::move(rules));
}

std::pair<bool, std::string> a6(Shared& sh) {
  auto env = make_env("synth.click-button");
  auto [obs, info] = env->reset(0);
  GenericAgent agent(GenericFlags{}, queue_model({"garbage", "more garbage", "<action></action>",
                                                  "<action>noop()</action>"}));
  auto step = agent.get_action(agent.obs_preprocessor(obs));
  const double n_retry = step.info.stats.at("n_retry");

  Benchmark b = synthetic_benchmark();
  b.episode_list = {{"synth.click-button", 0}};
  auto s = make_study(b, {generic_agent_args("scripted:noop")}, "", sh.dir.path(),
                      study_id("garbage"));
  RunOptions opt;
  opt.hooks.make_agent = [](const AgentArgs& a, const EpisodeSpec&) -> std::unique_ptr<Agent> {
    return std::make_unique<GenericAgent>(a.flags, queue_model({"x", "y", "z", "w"}));
  };
  run_study(s, opt);
  const auto result = *episode_records(s).at(0).result;
  const bool ok = !step.failed && step.action == "noop()" && n_retry == 3 &&
                  result.status == EpisodeStatus::failure;
  return {ok, fmt::format("n_retry={} with a valid 4th answer; 4 garbage answers give status {}",
                          n_retry, to_string(result.status))};
}

std::pair<bool, std::string> a7() {
  const std::vector<std::string> samples = {
      "click(\"169\")",
      "press(\"169\", \"Enter\")",
      "mouse_click(x=121, y=197)",
      "send_msg_to_user(\"The \\\"Upvote\\\" button has been clicked\")",
      "click('a51')",
      "click('b22', button='right')",
      "click('48', button='middle', modifiers=['Shift'])",
      "fill('237', 'example value')",
      "fill('45', 'multi-line\\nexample')",
      "fill('a12', 'example with \"quotes\"')",
      "scroll(0, 200)",
      "scroll(-50.2, -100.5)",
      "send_msg_to_user('Based on the results of my search, the city was built in 1751.')",
      "report_infeasible('I cannot follow these instructions because there is no email field in "
      "this form.')"};
  ActionSetConfig all;
  all.enabled_categories = all_action_categories();
  ActionSet set(all);
  std::size_t parsed = 0, fixed_points = 0;
  for (const auto& s : samples) {
    auto r = set.parse(s);
    if (auto* p = std::get_if<ParsedAction>(&r)) {
      ++parsed;
      const std::string c = canonical_text(*p);
      auto again = set.parse(c);
      if (auto* q = std::get_if<ParsedAction>(&again); q && canonical_text(*q) == c) ++fixed_points;
    }
  }
  SeededStream rng("acceptance-fuzz", 0);
  const std::string alphabet = "abcxyz_019 '\"\\,()[]=.-+\n\t#";
  std::size_t crashes = 0, fuzz_fixed = 0, fuzz_parsed = 0;
  for (int i = 0; i < kA7FuzzInputs; ++i) {
    std::string s;
    if (rng.below(3) == 0) {
      s = samples[rng.below(samples.size())];
      const auto cuts = rng.below(4);
      for (std::uint64_t k = 0; k < cuts && !s.empty(); ++k) {
        s[rng.below(s.size())] = alphabet[rng.below(alphabet.size())];
      }
    } else {
      const auto n = rng.below(48);
      for (std::uint64_t k = 0; k < n; ++k) {
        s.push_back(rng.below(5) == 0 ? static_cast<char>(rng.below(256))
                                      : alphabet[rng.below(alphabet.size())]);
      }
    }
    try {
      auto r = set.parse(s);
      if (auto* p = std::get_if<ParsedAction>(&r)) {
        ++fuzz_parsed;
        const std::string c = canonical_text(*p);
        auto again = set.parse(c);
        if (auto* q = std::get_if<ParsedAction>(&again); q && canonical_text(*q) == c) ++fuzz_fixed;
      }
    } catch (...) {
      ++crashes;
    }
  }
  const bool ok = parsed == samples.size() && fixed_points == samples.size() && crashes == 0 &&
                  fuzz_fixed == fuzz_parsed;
  return {ok, fmt::format("{}/{} reference strings parse, {} fixed points; {} fuzz inputs, {} "
                          "exceptions, {}/{} parsed fuzz inputs canonical-stable",
                          parsed, samples.size(), fixed_points, kA7FuzzInputs, crashes,
                          fuzz_fixed, fuzz_parsed)};
}

std::pair<bool, std::string> a8() {
  auto env = make_env("example.einstein");
  env->reset(0);
  const auto& page = env->browser().active_page();
  auto box = page.find_first([](const Node& n) { return n.tag == "textarea"; });
  if (!box) return {false, "search box not found"};
  env->step("fill('" + page.node(*box).bid + "', 'einstein')");
  auto r = env->step("click('241')");
  const std::string& err = r.observation.last_action_error;
  return {err.find("Timeout 500ms exceeded") != std::string::npos,
          fmt::format("last_action_error: {}", err.substr(0, err.find('\n')))};
}

std::pair<bool, std::string> a9() {
  const std::string golden =
      "[167] Section '', visible\n"
      "  [169] button 'Upvote', clickable, visible\n"
      "  StaticText '17705'\n"
      "  [179] button 'Downvote', clickable, visible";
  auto env = make_env("example.vote");
  auto [obs, info] = env->reset(0);
  const std::string ax = flatten_axtree(obs.axtree);
  const std::string html = flatten_html(obs.dom);
  const std::string prefix = "<form action=\"/sv/18838\" bid=\"167\"";
  const bool ok = ax == golden && html.rfind(prefix, 0) == 0;
  return {ok, fmt::format("axtree {}, html prefix {}", ax == golden ? "exact" : "differs:\n" + ax,
                          html.rfind(prefix, 0) == 0 ? "matches" : "differs")};
}

std::pair<bool, std::string> a10() {
  // Reference prompt: a 120-row listing page with HTML and AXTree, plus 12 history steps.
  SimBrowser b;
  b.register_page("local://rows", [](PageModel& p, std::uint64_t) {
    p.set_title("Rows");
    NodeId list = p.append(p.root(), "ul", {{"id", "rows"}});
    for (int i = 0; i < 120; ++i) {
      NodeId li = p.append(list, "li", {}, "row " + std::to_string(i));
      p.append(li, "button", {{"type", "button"}}, "Open row " + std::to_string(i));
    }
  });
  if (b.execute(cmd::Goto{"local://rows"}, 500)) return {false, "reference page failed to load"};
  const std::string goal = "Open the details of row 57.";
  auto obs = build_observation(b, {ContentPart::text(goal)}, {}, "");
  GenericFlags flags;
  flags.obs.use_html = true;
  std::vector<HistoryStep> history;
  for (int i = 0; i < 12; ++i) {
    history.push_back({"The list is long, I scroll down to look for the next rows, step " +
                           std::to_string(i) + ".",
                       "scroll(0, 300)", ""});
  }
  const auto components = build_generic_prompt(flags, generic_preprocess(flags.obs, obs), history);
  const auto full = count_tokens(concat(components));
  auto rank = [](const std::string& l) { return l == "history" ? 0 : l == "html" ? 1 : 2; };
  bool ok = true;
  std::string detail;
  for (double frac : {1.0, 0.5, 0.25}) {
    const auto budget = static_cast<std::size_t>(static_cast<double>(full) * frac);
    auto fit = fit_tokens(components, budget);
    bool ordered = true;
    for (std::size_t i = 1; i < fit.shrink_log.size(); ++i) {
      ordered &= rank(fit.shrink_log[i - 1]) <= rank(fit.shrink_log[i]);
    }
    const bool goal_kept = fit.text.find(goal) != std::string::npos;
    ok &= fit.tokens <= budget && goal_kept && ordered && !fit.overflow;
    std::set<std::string> shrunk(fit.shrink_log.begin(), fit.shrink_log.end());
    detail += fmt::format("[{:.0f}%: {}<={} goal {} order {} shrunk {{{}}}] ", frac * 100,
                          fit.tokens, budget, goal_kept ? "kept" : "lost",
                          ordered ? "ok" : "wrong", fmt::join(shrunk, ","));
  }
  return {ok, detail};
}

std::pair<bool, std::string> a11() {
  const auto s = success_stat({true, true, true, false});
  const double want_se = std::sqrt(0.75 * 0.25 / 4);
  bool ok = std::abs(s.success_rate - 0.75) <= kA11Tolerance &&
            std::abs(s.std_error - want_se) <= kA11Tolerance;
  double worst = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    SeededStream rng("acceptance-bernoulli", k);
    const auto n = static_cast<std::size_t>(rng.between(1, 200));
    const double p = rng.unit();
    std::vector<bool> v;
    long hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v.push_back(rng.unit() < p);
      hits += v.back();
    }
    // Brute force: mean and population variance by two passes.
    const double mean = static_cast<double>(hits) / static_cast<double>(n);
    double ss = 0;
    for (bool b : v) ss += std::pow((b ? 1.0 : 0.0) - mean, 2);
    const double se = std::sqrt(ss / static_cast<double>(n) / static_cast<double>(n));
    const auto got = success_stat(v);
    worst = std::max({worst, std::abs(got.success_rate - mean), std::abs(got.std_error - se)});
  }
  ok &= worst <= kA11Tolerance;
  return {ok, fmt::format("rate={} se={:.15f} (want {:.15f}); worst brute-force gap {:.2e} (tol {})",
                          s.success_rate, s.std_error, want_se, worst, kA11Tolerance)};
}

std::pair<bool, std::string> a12(Shared& sh) {
  const auto t0 = Clock::now();
  std::size_t total = 0, reproduced = 0;
  std::string first_bad;
  for (const Study* s : {&*sh.oracle, &*sh.heuristic}) {
    for (const auto& r : replay_study(*s)) {
      ++total;
      if (r.reproduced()) {
        ++reproduced;
      } else if (first_bad.empty()) {
        first_bad = r.episode_id;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {total > 0 && reproduced == total && secs < kA12MaxSeconds,
          fmt::format("{}/{} episodes replay with empty diffs in {:.1f}s (limit {}s){}", reproduced,
                      total, secs, kA12MaxSeconds, first_bad.empty() ? "" : "; first diff " + first_bad)};
}

std::pair<bool, std::string> a13(Shared& sh) {
  const std::vector<AgentArgs> agents = {random_agent_args(11)};
  auto reference = make_study(synthetic_benchmark(), agents, "", sh.dir.path(), study_id("whole"));
  run_study(reference);
  auto victim = make_study(synthetic_benchmark(), agents, "", sh.dir.path(), study_id("killed"));
  const std::size_t half = victim.episodes.size() / 2;

  std::fflush(stdout);
  const pid_t pid = fork();
  if (pid < 0) return {false, "fork failed"};
  if (pid == 0) {
    std::atomic<std::size_t> finished{0};
    RunOptions opt;
    opt.hooks.on_finish = [&](const EpisodeSpec&, const EpisodeResult&) { ++finished; };
    // Die mid-episode once half the episodes are written.
    opt.hooks.on_step = [&](const EpisodeSpec&, int) {
      if (finished >= half) ::kill(::getpid(), SIGKILL);
    };
    run_study(victim, opt);
    _exit(0);
  }
  int status = 0;
  waitpid(pid, &status, 0);
  const bool killed = WIFSIGNALED(status) && WTERMSIG(status) == SIGKILL;
  const auto pending = find_incomplete(victim, true).size();
  run_study(victim);
  const bool equal = aggregate(victim) == aggregate(reference);
  std::size_t same = 0;
  auto ra = episode_records(reference);
  auto rb = episode_records(victim);
  for (std::size_t i = 0; i < std::min(ra.size(), rb.size()); ++i) {
    if (ra[i].result && rb[i].result && strip_ms(*ra[i].result) == strip_ms(*rb[i].result)) ++same;
  }
  const bool ok = killed && pending > 0 && pending < victim.episodes.size() && equal &&
                  same == ra.size();
  return {ok, fmt::format("child {} with {} of {} episodes pending; after resume {}/{} episodes "
                          "match and aggregates {}",
                          killed ? "killed" : "not killed", pending, victim.episodes.size(), same,
                          ra.size(), equal ? "identical" : "differ")};
}

}  // namespace

int main() {
  Shared sh;
  criterion("A1", a1);
  criterion("A2", [&] { return a2(sh); });
  criterion("A3", [&] { return a3(sh); });
  criterion("A4", a4);
  criterion("A5", [&] { return a5(sh); });
  criterion("A6", [&] { return a6(sh); });
  criterion("A7", a7);
  criterion("A8", a8);
  criterion("A9", a9);
  criterion("A10", a10);
  criterion("A11", a11);
  criterion("A12", [&] {
    if (!sh.oracle || !sh.heuristic) return std::pair<bool, std::string>{false, "no recorded studies"};
    return a12(sh);
  });
  criterion("A13", [&] { return a13(sh); });
  fmt::print("{} of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
