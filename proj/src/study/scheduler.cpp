#include "wgym/study/scheduler.hpp"

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "wgym/common/errors.hpp"

namespace wgym {

DagScheduler::DagScheduler(std::vector<ScheduleItem> items,
                           const std::vector<std::pair<std::string, std::string>>& edges)
    : items_(std::move(items)), started_(items_.size(), false) {
  std::map<std::string, std::size_t> index;
  for (const auto& it : items_) {
    if (index.emplace(it.task_id, tasks_.size()).second) tasks_.push_back(it.task_id);
  }
  const std::size_t n = tasks_.size();
  pending_preds_.assign(n, 0);
  unfinished_.assign(n, 0);
  succs_.assign(n, {});
  members_.assign(n, {});
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const std::size_t t = index.at(items_[i].task_id);
    task_of_.push_back(t);
    ++unfinished_[t];
    members_[t].push_back(i);
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [a, b] : edges) {
    auto ia = index.find(a);
    auto ib = index.find(b);
    if (ia == index.end() || ib == index.end()) continue;
    if (!seen.emplace(ia->second, ib->second).second) continue;
    succs_[ia->second].push_back(ib->second);
    ++pending_preds_[ib->second];
  }

  // Kahn's algorithm on a copy to reject cycles up front.
  std::vector<std::size_t> indeg = pending_preds_;
  std::vector<std::size_t> queue;
  for (std::size_t t = 0; t < n; ++t) {
    if (indeg[t] == 0) queue.push_back(t);
  }
  std::size_t visited = 0;
  while (!queue.empty()) {
    const std::size_t t = queue.back();
    queue.pop_back();
    ++visited;
    for (std::size_t s : succs_[t]) {
      if (--indeg[s] == 0) queue.push_back(s);
    }
  }
  if (visited != n) throw ConfigError("task dependencies contain a cycle");

  for (std::size_t t = 0; t < n; ++t) {
    if (pending_preds_[t] == 0) release(tasks_[t]);
  }
}

void DagScheduler::release(const std::string& task) {
  auto it = std::find(tasks_.begin(), tasks_.end(), task);
  const std::size_t t = static_cast<std::size_t>(it - tasks_.begin());
  for (std::size_t i : members_[t]) ready_.emplace(items_[i].task_id, items_[i].seed, i);
}

std::optional<std::size_t> DagScheduler::next() {
  if (ready_.empty()) return std::nullopt;
  const std::size_t i = std::get<2>(*ready_.begin());
  ready_.erase(ready_.begin());
  started_[i] = true;
  ++running_;
  return i;
}

void DagScheduler::complete(std::size_t index) {
  if (index >= items_.size() || !started_.at(index)) {
    throw UsageError("complete() for an item that was not started");
  }
  --running_;
  ++completed_;
  const std::size_t t = task_of_[index];
  if (--unfinished_[t] > 0) return;
  for (std::size_t s : succs_[t]) {
    if (--pending_preds_[s] == 0) release(tasks_[s]);
  }
}

void run_scheduled(DagScheduler& scheduler, int n_jobs,
                   const std::function<void(std::size_t)>& work) {
  if (n_jobs < 1) throw ConfigError("n_jobs must be >= 1");
  std::mutex mu;
  std::condition_variable cv;
  std::exception_ptr failure;

  auto worker = [&] {
    std::unique_lock lock(mu);
    while (true) {
      if (failure || scheduler.done()) {
        cv.notify_all();
        return;
      }
      auto next = scheduler.next();
      if (!next) {
        if (scheduler.running() == 0) {
          // Nothing ready and nothing running: only possible if the graph
          // was inconsistent, which the constructor rules out.
          failure = std::make_exception_ptr(UsageError("scheduler stalled"));
          cv.notify_all();
          return;
        }
        cv.wait(lock);
        continue;
      }
      lock.unlock();
      try {
        work(*next);
      } catch (...) {
        lock.lock();
        if (!failure) failure = std::current_exception();
        scheduler.complete(*next);
        cv.notify_all();
        continue;
      }
      lock.lock();
      scheduler.complete(*next);
      cv.notify_all();
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(static_cast<std::size_t>(n_jobs), std::max<std::size_t>(scheduler.size(), 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace wgym
