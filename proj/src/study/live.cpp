#include "wgym/study/live.hpp"

#include "wgym/common/errors.hpp"

namespace wgym {

bool LiveSession::post_chat(std::string text) {
  std::lock_guard lock(mu_);
  if (ended_) return false;
  mailbox_.push_back(std::move(text));
  return true;
}

std::vector<std::string> LiveSession::take_messages() {
  std::lock_guard lock(mu_);
  std::vector<std::string> out(mailbox_.begin(), mailbox_.end());
  mailbox_.clear();
  return out;
}

void LiveSession::publish(std::string type, nlohmann::json data) {
  {
    std::lock_guard lock(mu_);
    if (ended_) return;
    events_.push_back({events_.size() + 1, std::move(type), std::move(data)});
  }
  cv_.notify_all();
}

void LiveSession::end(nlohmann::json data) {
  {
    std::lock_guard lock(mu_);
    if (ended_) return;
    events_.push_back({events_.size() + 1, "end", std::move(data)});
    ended_ = true;
    mailbox_.clear();
  }
  cv_.notify_all();
}

bool LiveSession::ended() const {
  std::lock_guard lock(mu_);
  return ended_;
}

std::vector<LiveEvent> LiveSession::events_after(std::uint64_t after,
                                                 std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return ended_ || events_.size() > after; });
  if (after >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(after), events_.end()};
}

std::shared_ptr<LiveSession> LiveHub::open(const std::string& id) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it != sessions_.end() && !it->second->ended()) {
    throw UsageError("live session " + id + " is already running");
  }
  auto s = std::make_shared<LiveSession>(id);
  sessions_[id] = s;
  return s;
}

std::shared_ptr<LiveSession> LiveHub::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::vector<std::string> LiveHub::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, v] : sessions_) out.push_back(k);
  return out;
}

}  // namespace wgym
