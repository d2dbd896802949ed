#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "wgym/llm/model.hpp"

namespace wgym {

struct RetryPolicy {
  std::chrono::milliseconds base{500};
  double factor = 2;
  double jitter = 0.2;  // +-20%
  std::function<void(std::chrono::milliseconds)> sleep;  // std::this_thread::sleep_for if empty

  // Delay before retry `attempt` (1-based), jitter drawn from `unit` in [0,1).
  std::chrono::milliseconds delay(int attempt, double unit) const;
};

// Request body: {"model_name", "messages": [{"role", "content"}],
// "temperature", "max_new_tokens"}. Response: {"text", "usage"?:
// {"prompt_tokens", "completion_tokens"}}; OpenAI-style "choices" bodies
// are accepted too.
nlohmann::json chat_request_body(const ModelArgs& args, const std::vector<LlmMessage>& messages);
// Throws TransportError for bodies without a completion text.
Completion parse_chat_response(const ModelArgs& args, const std::vector<LlmMessage>& messages,
                               const std::string& body);

// Plain-HTTP client. WGYM_LLM_ENDPOINT overrides args.endpoint and
// WGYM_LLM_API_KEY, when set, is sent as a bearer token.
class HttpChatModel : public ChatModel {
 public:
  explicit HttpChatModel(ModelArgs args, RetryPolicy retry = {});

  // Connection failures, HTTP 429 and 5xx are retried; other statuses fail
  // at once.
  Completion complete(const std::vector<LlmMessage>& messages) override;
  const ModelArgs& args() const override { return args_; }

 private:
  ModelArgs args_;
  RetryPolicy retry_;
  std::string endpoint_;
  std::optional<std::string> api_key_;
};

}  // namespace wgym
