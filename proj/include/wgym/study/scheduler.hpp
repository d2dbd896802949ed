#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace wgym {

// One schedulable unit: an episode of `task_id` with `seed`.
struct ScheduleItem {
  std::string task_id;
  std::uint64_t seed = 0;
};

// Ready-queue over a task dependency graph. Every item of task `b` waits for
// all items of task `a` when (a, b) is an edge. Edges naming tasks without
// items are ignored. Ready items come out in (task_id, seed, index) order.
// Not thread-safe; run_scheduled serializes access.
class DagScheduler {
 public:
  // Throws ConfigError when the edges form a cycle among scheduled tasks.
  DagScheduler(std::vector<ScheduleItem> items,
               const std::vector<std::pair<std::string, std::string>>& edges);

  // Next ready item, now marked running.
  std::optional<std::size_t> next();
  void complete(std::size_t index);

  bool done() const { return completed_ == items_.size(); }
  std::size_t running() const { return running_; }
  std::size_t size() const { return items_.size(); }
  const ScheduleItem& item(std::size_t i) const { return items_.at(i); }

 private:
  void release(const std::string& task);

  std::vector<ScheduleItem> items_;
  std::vector<std::size_t> task_of_;
  std::vector<std::string> tasks_;
  // Per task: number of unfinished predecessor tasks, unfinished items and
  // successor tasks.
  std::vector<std::size_t> pending_preds_;
  std::vector<std::size_t> unfinished_;
  std::vector<std::vector<std::size_t>> succs_;
  std::vector<std::vector<std::size_t>> members_;
  std::set<std::tuple<std::string, std::uint64_t, std::size_t>> ready_;
  std::vector<bool> started_;
  std::size_t running_ = 0;
  std::size_t completed_ = 0;
};

// Runs `work(index)` for every item on up to `n_jobs` threads, respecting
// the scheduler's order. The first exception thrown by `work` stops new
// starts and is rethrown after running items finish.
void run_scheduled(DagScheduler& scheduler, int n_jobs,
                   const std::function<void(std::size_t)>& work);

}  // namespace wgym
