#include "wgym/study/server.hpp"

#include <charconv>
#include <regex>

#include <fmt/format.h>
#include <httplib.h>

#include "wgym/common/errors.hpp"
#include "wgym/study/runner.hpp"

namespace wgym {

namespace fs = std::filesystem;

namespace {

ApiResult error(int status, std::string message) {
  return {status, {{"error", std::move(message)}}};
}

struct EpisodeRef {
  std::string study_id;
  int agent_index = 0;
  std::string dir_name;
};

std::optional<EpisodeRef> parse_episode_id(const std::string& id) {
  static const std::regex kId(R"(^([A-Za-z0-9._-]+):agent_([0-9]+):([A-Za-z0-9._-]+)$)");
  std::smatch m;
  if (!std::regex_match(id, m, kId)) return std::nullopt;
  EpisodeRef r;
  r.study_id = m[1];
  r.agent_index = std::stoi(m[2]);
  r.dir_name = m[3];
  if (r.dir_name.find("..") != std::string::npos) return std::nullopt;
  return r;
}

}  // namespace

StudyApi::StudyApi(fs::path root, std::shared_ptr<LiveHub> live)
    : root_(std::move(root)), live_(std::move(live)) {}

std::vector<Study> StudyApi::studies() const {
  std::vector<Study> out;
  if (fs::exists(root_ / kStudyFile)) {
    out.push_back(Study::load(root_));
    return out;
  }
  if (!fs::is_directory(root_)) return out;
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (entry.is_directory() && fs::exists(entry.path() / kStudyFile)) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) {
    try {
      out.push_back(Study::load(d));
    } catch (const ConfigError& e) {
      fmt::print(stderr, "warning: skipping {}: {}\n", d.string(), e.what());
    }
  }
  return out;
}

std::optional<Study> StudyApi::find_study(const std::string& id) const {
  for (auto& s : studies()) {
    if (s.id == id) return std::move(s);
  }
  return std::nullopt;
}

ApiResult StudyApi::list_studies() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : studies()) {
    nlohmann::json agents = nlohmann::json::array();
    for (const auto& a : s.agent_args_list) agents.push_back(a.agent_name);
    std::size_t finished = 0;
    for (const auto& rec : episode_records(s)) {
      if (rec.result && rec.result->status != EpisodeStatus::incomplete) ++finished;
    }
    out.push_back({{"id", s.id},
                   {"comment", s.comment},
                   {"benchmark", s.benchmark.name},
                   {"agents", agents},
                   {"n_episodes", s.episodes.size()},
                   {"n_finished", finished},
                   {"repro_info", s.repro_info}});
  }
  return {200, out};
}

ApiResult StudyApi::list_episodes(const std::string& study_id) const {
  auto s = find_study(study_id);
  if (!s) return error(404, "unknown study: " + study_id);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& rec : episode_records(*s)) {
    nlohmann::json e = {
        {"id", s->episode_id(rec.spec)},
        {"agent_index", rec.spec.agent_index},
        {"agent_name", s->agent_args_list.at(static_cast<std::size_t>(rec.spec.agent_index)).agent_name},
        {"task_id", rec.spec.task_id},
        {"seed", rec.spec.seed},
        {"attempt", rec.spec.attempt},
        {"max_steps", rec.spec.max_steps}};
    if (rec.result) {
      e["status"] = to_string(rec.result->status);
      e["reward"] = rec.result->reward;
      e["n_steps"] = rec.result->n_steps;
      e["elapsed_ms"] = rec.result->elapsed_ms;
      e["error_message"] =
          rec.result->error_message ? nlohmann::json(*rec.result->error_message) : nlohmann::json();
    } else {
      e["status"] = rec.started ? "incomplete" : "pending";
    }
    out.push_back(std::move(e));
  }
  return {200, out};
}

ApiResult StudyApi::get_step(const std::string& episode_id, const std::string& n) const {
  auto ref = parse_episode_id(episode_id);
  if (!ref) return error(404, "unknown episode: " + episode_id);
  auto s = find_study(ref->study_id);
  if (!s) return error(404, "unknown episode: " + episode_id);
  const fs::path dir = s->agent_dir(ref->agent_index) / ref->dir_name;
  if (!fs::is_directory(dir)) return error(404, "unknown episode: " + episode_id);
  std::size_t index = 0;
  auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), index);
  if (ec != std::errc() || ptr != n.data() + n.size()) {
    return error(400, "step index must be a non-negative integer");
  }
  std::vector<nlohmann::json> records;
  try {
    records = read_step_log(dir);
  } catch (const ConfigError&) {
    return error(404, "episode has no steps: " + episode_id);
  }
  if (index >= records.size()) {
    return error(404, fmt::format("step {} out of range; episode has {} steps", index, records.size()));
  }
  return {200, {{"episode_id", episode_id},
                {"step", index},
                {"n_steps", records.size()},
                {"record", records[index]}}};
}

ApiResult StudyApi::post_chat(const std::string& session, const std::string& body) const {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    return error(400, "body must be JSON");
  }
  if (!j.is_object() || !j.contains("text") || !j["text"].is_string() ||
      j["text"].get<std::string>().empty()) {
    return error(400, "body must be {\"text\": \"...\"} with non-empty text");
  }
  auto s = live_ ? live_->find(session) : nullptr;
  if (!s) return error(404, "unknown live session: " + session);
  if (!s->post_chat(j["text"].get<std::string>())) {
    return error(409, "live session has ended: " + session);
  }
  return {202, {{"status", "queued"}, {"session", session}}};
}

std::string format_sse(const LiveEvent& e) {
  return fmt::format("event: {}\nid: {}\ndata: {}\n\n", e.type, e.seq, e.data.dump());
}

struct ApiServer::Impl {
  explicit Impl(StudyApi a) : api(std::move(a)) {}
  StudyApi api;
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, const ApiResult& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

}  // namespace

ApiServer::ApiServer(StudyApi api) : impl_(std::make_unique<Impl>(std::move(api))) {
  auto& srv = impl_->server;
  const StudyApi* api_ptr = &impl_->api;
  srv.Get("/api/studies", [api_ptr](const httplib::Request&, httplib::Response& res) {
    reply(res, api_ptr->list_studies());
  });
  srv.Get(R"(/api/studies/([^/]+)/episodes)",
          [api_ptr](const httplib::Request& req, httplib::Response& res) {
            reply(res, api_ptr->list_episodes(req.matches[1]));
          });
  srv.Get(R"(/api/episodes/([^/]+)/steps/([^/]+))",
          [api_ptr](const httplib::Request& req, httplib::Response& res) {
            reply(res, api_ptr->get_step(req.matches[1], req.matches[2]));
          });
  srv.Post(R"(/api/live/([^/]+)/chat)",
           [api_ptr](const httplib::Request& req, httplib::Response& res) {
             reply(res, api_ptr->post_chat(req.matches[1], req.body));
           });
  srv.Get(R"(/api/live/([^/]+)/events)",
          [api_ptr](const httplib::Request& req, httplib::Response& res) {
            auto session = api_ptr->live() ? api_ptr->live()->find(req.matches[1]) : nullptr;
            if (!session) {
              reply(res, error(404, "unknown live session: " + std::string(req.matches[1])));
              return;
            }
            std::uint64_t start = 0;
            if (req.has_header("Last-Event-ID")) {
              try {
                start = std::stoull(req.get_header_value("Last-Event-ID"));
              } catch (const std::exception&) {
                start = 0;
              }
            }
            auto cursor = std::make_shared<std::uint64_t>(start);
            res.set_header("Cache-Control", "no-cache");
            res.set_chunked_content_provider(
                "text/event-stream", [session, cursor](std::size_t, httplib::DataSink& sink) {
                  auto events = session->events_after(*cursor, std::chrono::milliseconds(250));
                  for (const auto& e : events) {
                    const std::string chunk = format_sse(e);
                    if (!sink.write(chunk.data(), chunk.size())) return false;
                    *cursor = e.seq;
                  }
                  if (session->ended() && session->events_after(*cursor).empty()) {
                    sink.done();
                  } else if (events.empty()) {
                    static const std::string kKeepAlive = ": keep-alive\n\n";
                    if (!sink.write(kKeepAlive.data(), kKeepAlive.size())) return false;
                  }
                  return true;
                });
          });
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(nlohmann::json{{"error", httplib::status_message(res.status)}}.dump(),
                      "application/json");
    }
  });
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int p = impl_->server.bind_to_any_port(host);
    if (p < 0) throw ConfigError("cannot bind " + host);
    return p;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw ConfigError(fmt::format("cannot bind {}:{}", host, port));
  }
  return port;
}

void ApiServer::listen() { impl_->server.listen_after_bind(); }

void ApiServer::stop() {
  if (impl_) impl_->server.stop();
}

void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace wgym
