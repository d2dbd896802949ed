#include "wgym/llm/http_model.hpp"

#include <chrono>
#include <cstdlib>
#include <random>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "wgym/common/errors.hpp"
#include "wgym/llm/tokens.hpp"

namespace wgym {

namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  if (url.rfind("http://", 0) != 0) {
    throw ConfigError("endpoint must be an http:// url, got '" + url + "'");
  }
  const auto slash = url.find('/', 7);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace

std::chrono::milliseconds RetryPolicy::delay(int attempt, double unit) const {
  double ms = static_cast<double>(base.count());
  for (int i = 1; i < attempt; ++i) ms *= factor;
  ms *= 1.0 + jitter * (2.0 * unit - 1.0);
  return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

nlohmann::json chat_request_body(const ModelArgs& args, const std::vector<LlmMessage>& messages) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  return nlohmann::json{{"model_name", args.model_name},
                        {"messages", msgs},
                        {"temperature", args.temperature},
                        {"max_new_tokens", args.max_new_tokens}};
}

Completion parse_chat_response(const ModelArgs& args, const std::vector<LlmMessage>& messages,
                               const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed completion response: ") + e.what());
  }
  Completion c;
  if (j.contains("text") && j["text"].is_string()) {
    c.text = j["text"].get<std::string>();
  } else if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty() &&
             j["choices"][0].contains("message")) {
    c.text = j["choices"][0]["message"].value("content", "");
  } else {
    throw TransportError("completion response has no text");
  }
  const auto usage = j.find("usage");
  if (usage != j.end() && usage->is_object() && usage->contains("prompt_tokens") &&
      usage->contains("completion_tokens")) {
    c.usage = priced_usage(args, (*usage)["prompt_tokens"].get<std::int64_t>(),
                           (*usage)["completion_tokens"].get<std::int64_t>(), false);
  } else {
    c.usage = priced_usage(args, estimate_prompt_tokens(messages),
                           static_cast<std::int64_t>(count_tokens(c.text)), true);
  }
  return c;
}

HttpChatModel::HttpChatModel(ModelArgs args, RetryPolicy retry)
    : args_(std::move(args)), retry_(std::move(retry)) {
  endpoint_ = env("WGYM_LLM_ENDPOINT").value_or(args_.endpoint);
  if (endpoint_.empty()) throw ConfigError("model " + args_.model_name + " has no endpoint");
  split_url(endpoint_);
  api_key_ = env("WGYM_LLM_API_KEY");
}

Completion HttpChatModel::complete(const std::vector<LlmMessage>& messages) {
  if (messages.empty()) throw std::invalid_argument("complete: empty message list");
  const Url url = split_url(endpoint_);
  const std::string body = chat_request_body(args_, messages).dump();
  httplib::Headers headers;
  if (api_key_) headers.emplace("Authorization", "Bearer " + *api_key_);

  std::mt19937_64 jitter_rng(std::random_device{}());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::string last_error;
  const auto started = std::chrono::steady_clock::now();
  for (int attempt = 0; attempt <= args_.max_transport_retries; ++attempt) {
    if (attempt > 0) {
      const auto d = retry_.delay(attempt, unit(jitter_rng));
      if (retry_.sleep) {
        retry_.sleep(d);
      } else {
        std::this_thread::sleep_for(d);
      }
    }
    httplib::Client client(url.origin);
    const auto timeout = std::chrono::milliseconds(args_.request_timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(url.path, headers, body, "application/json");
    if (!res) {
      last_error = fmt::format("request to {} failed: {}", endpoint_, httplib::to_string(res.error()));
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = fmt::format("request to {} returned HTTP {}", endpoint_, res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError(fmt::format("request to {} returned HTTP {}: {}", endpoint_,
                                       res->status, res->body.substr(0, 200)));
    }
    Completion c = parse_chat_response(args_, messages, res->body);
    c.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    return c;
  }
  throw TransportError(fmt::format("giving up after {} attempts: {}",
                                   args_.max_transport_retries + 1, last_error));
}

}  // namespace wgym
