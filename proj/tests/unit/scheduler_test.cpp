#include <gtest/gtest.h>

#include <atomic>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "wgym/common/errors.hpp"
#include "wgym/common/rng.hpp"
#include "wgym/study/scheduler.hpp"

namespace wgym {
namespace {

using Edges = std::vector<std::pair<std::string, std::string>>;

std::vector<ScheduleItem> items_for(const std::vector<std::string>& tasks, int seeds) {
  std::vector<ScheduleItem> out;
  for (const auto& t : tasks) {
    for (int s = 0; s < seeds; ++s) out.push_back({t, static_cast<std::uint64_t>(s)});
  }
  return out;
}

TEST(DagScheduler, NoEdgesReleasesEverythingInOrder) {
  DagScheduler s(items_for({"b", "a"}, 2), {});
  std::vector<std::string> order;
  while (auto i = s.next()) order.push_back(s.item(*i).task_id + std::to_string(s.item(*i).seed));
  EXPECT_EQ(order, (std::vector<std::string>{"a0", "a1", "b0", "b1"}));
  EXPECT_EQ(s.running(), 4u);
  EXPECT_FALSE(s.done());
}

TEST(DagScheduler, ChainWaitsForAllPredecessorItems) {
  DagScheduler s(items_for({"a", "b"}, 2), {{"a", "b"}});
  auto first = s.next();
  auto second = s.next();
  ASSERT_TRUE(first && second);
  EXPECT_EQ(s.item(*first).task_id, "a");
  EXPECT_EQ(s.item(*second).task_id, "a");
  EXPECT_FALSE(s.next());
  s.complete(*first);
  EXPECT_FALSE(s.next());
  s.complete(*second);
  auto third = s.next();
  ASSERT_TRUE(third);
  EXPECT_EQ(s.item(*third).task_id, "b");
}

TEST(DagScheduler, CycleThrows) {
  EXPECT_THROW(DagScheduler(items_for({"a", "b", "c"}, 1), {{"a", "b"}, {"b", "c"}, {"c", "a"}}),
               ConfigError);
}

TEST(DagScheduler, EdgesToUnscheduledTasksIgnored) {
  DagScheduler s(items_for({"b"}, 1), {{"ghost", "b"}});
  EXPECT_TRUE(s.next());
}

TEST(RunScheduled, DiamondRespectsOrderUnderConcurrency) {
  const Edges edges = {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}};
  for (int round = 0; round < 20; ++round) {
    SeededStream rng("diamond", static_cast<std::uint64_t>(round));
    DagScheduler s(items_for({"a", "b", "c", "d"}, 3), edges);
    std::mutex mu;
    std::map<std::string, int> started, finished;
    std::atomic<int> violations{0};
    std::atomic<int> active{0}, peak{0};
    const int jobs = static_cast<int>(rng.between(1, 6));
    std::vector<int> sleeps;
    for (std::size_t i = 0; i < s.size(); ++i) sleeps.push_back(static_cast<int>(rng.below(3)));
    run_scheduled(s, jobs, [&](std::size_t i) {
      const auto now = ++active;
      int p = peak.load();
      while (now > p && !peak.compare_exchange_weak(p, now)) {
      }
      const std::string t = s.item(i).task_id;
      {
        std::lock_guard lk(mu);
        for (const auto& [from, to] : edges) {
          if (to == t && finished[from] != 3) ++violations;
        }
        ++started[t];
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(sleeps[i]));
      {
        std::lock_guard lk(mu);
        ++finished[t];
      }
      --active;
    });
    EXPECT_EQ(violations.load(), 0);
    EXPECT_TRUE(s.done());
    EXPECT_LE(peak.load(), jobs);
    for (const auto& t : {"a", "b", "c", "d"}) EXPECT_EQ(finished[t], 3);
  }
}

TEST(RunScheduled, ExceptionStopsNewStartsAndRethrows) {
  DagScheduler s(items_for({"a", "b"}, 3), {{"a", "b"}});
  std::atomic<int> ran_b{0};
  EXPECT_THROW(run_scheduled(s, 2,
                             [&](std::size_t i) {
                               if (s.item(i).task_id == "b") ++ran_b;
                               if (s.item(i).seed == 1) throw std::runtime_error("boom");
                             }),
               std::runtime_error);
  EXPECT_EQ(ran_b.load(), 0);
}

TEST(RunScheduled, SingleJobIsSequentialInOrder) {
  DagScheduler s(items_for({"c", "a", "b"}, 2), {{"c", "a"}});
  std::vector<std::string> order;
  run_scheduled(s, 1, [&](std::size_t i) { order.push_back(s.item(i).task_id); });
  EXPECT_EQ(order, (std::vector<std::string>{"b", "b", "c", "c", "a", "a"}));
}

}  // namespace
}  // namespace wgym
