#pragma once

#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "wgym/llm/model.hpp"

namespace wgym {

// A rule with a matcher answers every request whose text contains the
// matcher. Rules without one form a queue consumed in order.
struct ScriptRule {
  std::optional<std::string> match;
  std::string response;
};

class ScriptedModel : public ChatModel {
 public:
  using Responder = std::function<std::string(const std::vector<LlmMessage>&)>;

  explicit ScriptedModel(std::vector<ScriptRule> script, ModelArgs args = {});
  // Computes every response from the request.
  explicit ScriptedModel(Responder responder, ModelArgs args = {});

  // First matching rule, else the next queued response. Throws
  // ScriptExhausted when neither applies.
  Completion complete(const std::vector<LlmMessage>& messages) override;
  const ModelArgs& args() const override { return args_; }
  std::size_t calls() const;

 private:
  ModelArgs args_;
  std::vector<ScriptRule> matchers_;
  std::deque<std::string> queue_;
  Responder responder_;
  mutable std::mutex mu_;
  std::size_t calls_ = 0;
};

// Built-in scripts selected by model name:
//   scripted:noop       always answers noop()
//   scripted:heuristic  clicks a clickable element of the AXTree in the
//                       prompt, chosen by a hash of the prompt
//   scripted:file=PATH  rules from a JSON array of {"match"?, "response"}
// Throws ConfigError for unknown names.
std::unique_ptr<ChatModel> make_scripted_model(const ModelArgs& args);

std::vector<ScriptRule> load_script(const std::string& path);

}  // namespace wgym
