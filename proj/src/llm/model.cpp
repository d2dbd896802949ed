#include "wgym/llm/model.hpp"

#include "wgym/common/errors.hpp"
#include "wgym/llm/http_model.hpp"
#include "wgym/llm/scripted.hpp"
#include "wgym/llm/tokens.hpp"

namespace wgym {

std::string_view to_string(LlmMessage::Role role) {
  switch (role) {
    case LlmMessage::Role::system:
      return "system";
    case LlmMessage::Role::user:
      return "user";
    case LlmMessage::Role::assistant:
      return "assistant";
  }
  return "user";
}

LlmMessage::Role llm_role_from_string(std::string_view name) {
  if (name == "system") return LlmMessage::Role::system;
  if (name == "user") return LlmMessage::Role::user;
  if (name == "assistant") return LlmMessage::Role::assistant;
  throw ConfigError("unknown message role '" + std::string(name) + "'");
}

void ModelArgs::validate() const {
  if (model_name.empty()) throw ConfigError("model_name must not be empty");
  if (temperature < 0) throw ConfigError("temperature must be >= 0");
  if (max_new_tokens < 1) throw ConfigError("max_new_tokens must be >= 1");
  if (price_per_1k_prompt < 0 || price_per_1k_completion < 0) {
    throw ConfigError("prices must be >= 0");
  }
  if (request_timeout_ms < 1) throw ConfigError("request_timeout_ms must be >= 1");
  if (max_transport_retries < 0) throw ConfigError("max_transport_retries must be >= 0");
  if (model_name.rfind("scripted:", 0) == 0) {
    const std::string_view script = std::string_view(model_name).substr(9);
    if (script != "noop" && script != "heuristic" && script.rfind("file=", 0) != 0) {
      throw ConfigError("unknown scripted model '" + model_name +
                        "' (expected scripted:noop, scripted:heuristic or scripted:file=PATH)");
    }
  }
}

void to_json(nlohmann::json& j, const ModelArgs& a) {
  j = nlohmann::json{{"model_name", a.model_name},
                     {"endpoint", a.endpoint},
                     {"temperature", a.temperature},
                     {"max_new_tokens", a.max_new_tokens},
                     {"price_per_1k_prompt", a.price_per_1k_prompt},
                     {"price_per_1k_completion", a.price_per_1k_completion},
                     {"request_timeout_ms", a.request_timeout_ms},
                     {"max_transport_retries", a.max_transport_retries}};
}

void from_json(const nlohmann::json& j, ModelArgs& a) {
  ModelArgs d;
  a.model_name = j.at("model_name").get<std::string>();
  a.endpoint = j.value("endpoint", d.endpoint);
  a.temperature = j.value("temperature", d.temperature);
  a.max_new_tokens = j.value("max_new_tokens", d.max_new_tokens);
  a.price_per_1k_prompt = j.value("price_per_1k_prompt", d.price_per_1k_prompt);
  a.price_per_1k_completion = j.value("price_per_1k_completion", d.price_per_1k_completion);
  a.request_timeout_ms = j.value("request_timeout_ms", d.request_timeout_ms);
  a.max_transport_retries = j.value("max_transport_retries", d.max_transport_retries);
}

Usage priced_usage(const ModelArgs& args, std::int64_t prompt_tokens,
                   std::int64_t completion_tokens, bool estimated) {
  return Usage{prompt_tokens, completion_tokens,
               usage_cost(prompt_tokens, completion_tokens, args.price_per_1k_prompt,
                          args.price_per_1k_completion),
               estimated};
}

std::int64_t estimate_prompt_tokens(const std::vector<LlmMessage>& messages) {
  std::int64_t n = 0;
  for (const auto& m : messages) n += static_cast<std::int64_t>(count_tokens(m.content));
  return n;
}

std::unique_ptr<ChatModel> make_model(const ModelArgs& args) {
  args.validate();
  if (args.model_name.rfind("scripted:", 0) == 0) return make_scripted_model(args);
  return std::make_unique<HttpChatModel>(args);
}

}  // namespace wgym
