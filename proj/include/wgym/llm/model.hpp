#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wgym/llm/usage.hpp"

namespace wgym {

// One entry of a provider-agnostic chat request.
struct LlmMessage {
  enum class Role { system, user, assistant };
  Role role = Role::user;
  std::string content;

  bool operator==(const LlmMessage&) const = default;
};

std::string_view to_string(LlmMessage::Role role);
LlmMessage::Role llm_role_from_string(std::string_view name);

struct ModelArgs {
  // "scripted:<script>" selects a ScriptedModel; anything else is sent to
  // `endpoint` over HTTP.
  std::string model_name;
  std::string endpoint;
  double temperature = 0;
  int max_new_tokens = 512;
  double price_per_1k_prompt = 0;
  double price_per_1k_completion = 0;
  int request_timeout_ms = 60000;
  int max_transport_retries = 3;

  // Throws ConfigError.
  void validate() const;
  bool operator==(const ModelArgs&) const = default;
};

void to_json(nlohmann::json& j, const ModelArgs& a);
void from_json(const nlohmann::json& j, ModelArgs& a);

struct Completion {
  std::string text;
  Usage usage;
  std::int64_t latency_ms = 0;
};

// The provider could not be reached after all retries. The orchestrator
// records the episode as a (relaunchable) system error.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scripted model ran out of responses: a broken test, not a model answer.
class ScriptExhausted : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ChatModel {
 public:
  virtual ~ChatModel() = default;
  // `messages` must be non-empty.
  virtual Completion complete(const std::vector<LlmMessage>& messages) = 0;
  virtual const ModelArgs& args() const = 0;
};

// Usage from token counts and the configured prices.
Usage priced_usage(const ModelArgs& args, std::int64_t prompt_tokens,
                   std::int64_t completion_tokens, bool estimated);
// Token estimate for a request, from the default counter.
std::int64_t estimate_prompt_tokens(const std::vector<LlmMessage>& messages);

std::unique_ptr<ChatModel> make_model(const ModelArgs& args);

}  // namespace wgym
