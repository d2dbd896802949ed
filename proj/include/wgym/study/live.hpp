#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace wgym {

struct LiveEvent {
  std::uint64_t seq = 0;
  // "reset", "chat", "step" or "end".
  std::string type;
  nlohmann::json data;
};

// An in-flight episode that a user can watch and steer. Posted chat text
// waits in a mailbox until the episode worker drains it between steps.
class LiveSession {
 public:
  explicit LiveSession(std::string id) : id_(std::move(id)) {}

  const std::string& id() const { return id_; }

  // False (and nothing queued) once the session has ended.
  bool post_chat(std::string text);
  std::vector<std::string> take_messages();

  void publish(std::string type, nlohmann::json data);
  // Publishes a final "end" event; later posts are refused.
  void end(nlohmann::json data = nlohmann::json::object());
  bool ended() const;

  // Events with seq > after. Blocks up to `timeout` while there are none and
  // the session is still running.
  std::vector<LiveEvent> events_after(std::uint64_t after,
                                      std::chrono::milliseconds timeout = std::chrono::milliseconds(0)) const;

 private:
  std::string id_;
  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  std::deque<std::string> mailbox_;
  std::vector<LiveEvent> events_;
  bool ended_ = false;
};

class LiveHub {
 public:
  // Replaces an ended session with the same id; throws UsageError when one
  // is still running.
  std::shared_ptr<LiveSession> open(const std::string& id);
  std::shared_ptr<LiveSession> find(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<LiveSession>> sessions_;
};

}  // namespace wgym
