#include <gtest/gtest.h>

#include <atomic>
#include <fstream>

#include "support/test_support.hpp"
#include "wgym/common/errors.hpp"
#include "wgym/llm/scripted.hpp"
#include "wgym/study/replay.hpp"
#include "wgym/study/runner.hpp"
#include "wgym/study/study.hpp"
#include "wgym/tasks/synthetic.hpp"

namespace wgym {
namespace {

using wgym::testing::TempDir;

StudyOptions one_seed(const std::string& id = "s1") {
  StudyOptions o;
  o.seeds_per_task = 1;
  o.id = id;
  return o;
}

TEST(MakeStudy, EpisodesPerAgent) {
  TempDir dir;
  auto s = make_study(synthetic_benchmark(), {oracle_agent_args()}, "c", dir.path(),
                      StudyOptions{.id = "a"});
  EXPECT_EQ(s.episodes.size(), 50u);
  auto two = make_study(synthetic_benchmark(), {oracle_agent_args(), random_agent_args(1)}, "c",
                        dir.path(), StudyOptions{.id = "b"});
  EXPECT_EQ(two.episodes.size(), 100u);
  EXPECT_EQ(two.agent_episodes(1).size(), 50u);
  EXPECT_TRUE(std::filesystem::exists(dir / "b" / kStudyFile));
}

TEST(MakeStudy, ReproInfoAndRoundTrip) {
  TempDir dir;
  auto s = make_study(synthetic_benchmark(), {generic_agent_args("scripted:noop")}, "note",
                      dir.path(), one_seed());
  for (const char* k : kReproKeys) EXPECT_TRUE(s.repro_info.count(k)) << k;
  auto loaded = Study::load(s.dir);
  EXPECT_EQ(loaded.id, s.id);
  EXPECT_EQ(loaded.comment, "note");
  EXPECT_EQ(loaded.episodes, s.episodes);
  EXPECT_EQ(loaded.agent_args_list, s.agent_args_list);
  EXPECT_EQ(loaded.repro_info, s.repro_info);
}

TEST(MakeStudy, RejectsBadConfig) {
  TempDir dir;
  EXPECT_THROW(make_study(synthetic_benchmark(), {}, "", dir.path()), ConfigError);
  EXPECT_THROW(Study::load(dir / "missing"), ConfigError);
}

TEST(MakeStudy, EpisodeIdsAreUnique) {
  TempDir dir;
  auto s = make_study(synthetic_benchmark(), {oracle_agent_args(), oracle_agent_args()}, "",
                      dir.path(), one_seed());
  std::set<std::string> ids;
  for (const auto& e : s.episodes) ids.insert(s.episode_id(e));
  EXPECT_EQ(ids.size(), s.episodes.size());
  EXPECT_EQ(s.episode_id(s.episodes[0]).rfind("s1:agent_0:", 0), 0u);
}

TEST(RunStudy, FreshStudyIsAllIncomplete) {
  TempDir dir;
  auto s = make_study(synthetic_benchmark(), {oracle_agent_args()}, "", dir.path(), one_seed());
  EXPECT_EQ(find_incomplete(s, true).size(), 10u);
  EXPECT_TRUE(aggregate(s).empty());
}

TEST(RunStudy, OracleCompletesAndAggregates) {
  TempDir dir;
  auto s = make_study(synthetic_benchmark(), {oracle_agent_args()}, "", dir.path(), one_seed());
  auto summary = run_study(s);
  EXPECT_EQ(summary.episodes_run, 10u);
  EXPECT_EQ(summary.errors_left, 0u);
  EXPECT_TRUE(find_incomplete(s, true).empty());
  auto m = aggregate(s);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.at(0).overall.success_rate, 1.0);
  EXPECT_EQ(m.at(0).overall.n, 10u);
  EXPECT_EQ(aggregate(Study::load(s.dir)), m);
  for (const auto& rec : episode_records(s)) {
    ASSERT_TRUE(rec.result);
    EXPECT_TRUE(rec.result->consistent());
    EXPECT_EQ(static_cast<std::size_t>(rec.result->n_steps), read_step_log(rec.dir).size());
  }
}

TEST(RunStudy, ErroredEpisodesAreRelaunched) {
  TempDir dir;
  auto s = make_study(synthetic_benchmark(), {oracle_agent_args()}, "", dir.path(), one_seed());
  RunOptions opt;
  opt.hooks.fault_hook = [](const EpisodeSpec& spec) -> SimBrowser::FaultHook {
    if (spec.attempt >= 2) return {};
    return [](const BackendCommand&) { throw BackendFailure("injected"); };
  };
  auto summary = run_study(s, opt);
  EXPECT_EQ(summary.errors_left, 0u);
  EXPECT_EQ(summary.passes, 3);
  for (const auto& rec : episode_records(s)) {
    EXPECT_EQ(rec.spec.attempt, 2);
    ASSERT_TRUE(rec.result);
    EXPECT_EQ(rec.result->status, EpisodeStatus::success);
  }
}

TEST(RunStudy, PermanentErrorsStopAtRelaunchCap) {
  TempDir dir;
  auto s = make_study(synthetic_benchmark(), {oracle_agent_args()}, "", dir.path(), one_seed());
  RunOptions opt;
  opt.hooks.fault_hook = [](const EpisodeSpec&) -> SimBrowser::FaultHook {
    return [](const BackendCommand&) { throw BackendFailure("down"); };
  };
  auto summary = run_study(s, opt);
  EXPECT_EQ(summary.errors_left, 10u);
  EXPECT_TRUE(find_incomplete(s, true).empty());
  EXPECT_EQ(find_incomplete(s, false).size(), 0u);
  for (const auto& rec : episode_records(s)) {
    EXPECT_EQ(rec.spec.attempt, kMaxRelaunches);
    EXPECT_NE(rec.result->error_message->find("down"), std::string::npos);
  }
  EXPECT_TRUE(aggregate(s).empty());
}

TEST(RunStudy, UnfinishedEpisodeKeepsAttemptAndReruns) {
  TempDir dir;
  auto s = make_study(synthetic_benchmark(), {oracle_agent_args()}, "", dir.path(), one_seed());
  run_study(s);
  const auto victim = s.episodes[3];
  std::filesystem::remove(s.episode_dir(victim) / kResultFile);
  auto pending = find_incomplete(s, true);
  ASSERT_EQ(pending.size(), 1u);
  EXPECT_EQ(pending[0], victim);
  std::ofstream(s.episode_dir(victim) / kResultFile) << "{not json";
  EXPECT_EQ(find_incomplete(s, true).size(), 1u);
  run_study(s);
  EXPECT_TRUE(find_incomplete(s, true).empty());
}

TEST(RunStudy, AgentFailureEndsEpisodeAsFailure) {
  TempDir dir;
  auto args = generic_agent_args("scripted:noop");
  auto s = make_study(synthetic_benchmark(), {args}, "", dir.path(), one_seed());
  RunOptions opt;
  opt.hooks.make_agent = [](const AgentArgs& a, const EpisodeSpec&) -> std::unique_ptr<Agent> {
    return std::make_unique<GenericAgent>(
        a.flags, std::make_unique<ScriptedModel>(
                     [](const std::vector<LlmMessage>&) { return std::string("no action"); }));
  };
  run_study(s, opt);
  for (const auto& rec : episode_records(s)) {
    ASSERT_TRUE(rec.result);
    EXPECT_EQ(rec.result->status, EpisodeStatus::failure);
    EXPECT_TRUE(rec.result->terminated);
    EXPECT_EQ(rec.result->n_steps, 0);
    auto log = read_step_log(rec.dir);
    ASSERT_EQ(log.size(), 1u);
    EXPECT_TRUE(log[0].at("failed").get<bool>());
  }
}

TEST(RunStudy, LiveChatReachesNextPrompt) {
  TempDir dir;
  Benchmark b = synthetic_benchmark();
  b.episode_list = {{"synth.click-button", 0}};
  auto s = make_study(b, {generic_agent_args("scripted:noop")}, "", dir.path(), one_seed());
  ASSERT_EQ(s.episodes.size(), 1u);
  RunOptions opt;
  opt.live = std::make_shared<LiveHub>();
  const std::string id = s.episode_id(s.episodes[0]);
  opt.hooks.on_step = [&](const EpisodeSpec&, int step) {
    if (step == 0) {
      EXPECT_TRUE(opt.live->find(id)->post_chat("try the other button"));
    }
  };
  run_study(s, opt);
  auto log = read_step_log(s.episode_dir(s.episodes[0]));
  ASSERT_GE(log.size(), 2u);
  EXPECT_EQ(recorded_prompt(log[0]).find("try the other button"), std::string::npos);
  EXPECT_NE(recorded_prompt(log[1]).find("try the other button"), std::string::npos);
  EXPECT_EQ(log[1].at("injected_messages")[0], "try the other button");
  auto session = opt.live->find(id);
  EXPECT_TRUE(session->ended());
  EXPECT_FALSE(session->post_chat("too late"));
}

TEST(RunStudy, ParallelMatchesSequential) {
  TempDir dir;
  auto a = make_study(synthetic_benchmark(), {random_agent_args(3)}, "", dir.path(), one_seed("p1"));
  auto b = make_study(synthetic_benchmark(), {random_agent_args(3)}, "", dir.path(), one_seed("p8"));
  run_study(a, RunOptions{.n_jobs = 1});
  run_study(b, RunOptions{.n_jobs = 8});
  auto ra = episode_records(a);
  auto rb = episode_records(b);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    auto x = *ra[i].result;
    auto y = *rb[i].result;
    x.elapsed_ms = y.elapsed_ms = 0;
    EXPECT_EQ(x, y) << ra[i].spec.key();
  }
  EXPECT_EQ(aggregate(a), aggregate(b));
}

TEST(RunStudy, RejectsBadOptions) {
  TempDir dir;
  auto s = make_study(synthetic_benchmark(), {oracle_agent_args()}, "", dir.path(), one_seed());
  EXPECT_THROW(run_study(s, RunOptions{.n_jobs = 0}), ConfigError);
  EXPECT_THROW(run_study(s, RunOptions{.max_relaunch_rounds = 9}), ConfigError);
}

TEST(WriteJsonAtomic, LeavesNoTemporary) {
  TempDir dir;
  write_json_atomic(dir / "x.json", {{"a", 1}});
  EXPECT_EQ(read_json_file(dir / "x.json").at("a"), 1);
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++n;
  EXPECT_EQ(n, 1u);
}

}  // namespace
}  // namespace wgym
