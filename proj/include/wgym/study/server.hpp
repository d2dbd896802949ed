#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgym/study/live.hpp"
#include "wgym/study/study.hpp"

namespace wgym {

struct ApiResult {
  int status = 200;
  nlohmann::json body;
};

// Read-only projections of a study directory plus the live chat mailbox.
// `root` is either one study directory or a directory of studies.
class StudyApi {
 public:
  StudyApi(std::filesystem::path root, std::shared_ptr<LiveHub> live = nullptr);

  // GET /api/studies
  ApiResult list_studies() const;
  // GET /api/studies/{id}/episodes
  ApiResult list_episodes(const std::string& study_id) const;
  // GET /api/episodes/{id}/steps/{n}
  ApiResult get_step(const std::string& episode_id, const std::string& n) const;
  // POST /api/live/{session}/chat with body {"text": "..."}
  ApiResult post_chat(const std::string& session, const std::string& body) const;

  std::vector<Study> studies() const;
  std::optional<Study> find_study(const std::string& id) const;
  const std::shared_ptr<LiveHub>& live() const { return live_; }

 private:
  std::filesystem::path root_;
  std::shared_ptr<LiveHub> live_;
};

// "event: <type>\nid: <seq>\ndata: <json>\n\n"
std::string format_sse(const LiveEvent& event);

// HTTP front end for StudyApi, including the event stream
// GET /api/live/{session}/events.
class ApiServer {
 public:
  explicit ApiServer(StudyApi api);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Port 0 picks a free port. Returns the bound port or throws ConfigError.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wgym
