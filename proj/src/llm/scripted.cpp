#include "wgym/llm/scripted.hpp"

#include <fstream>
#include <regex>

#include <fmt/format.h>

#include "wgym/common/errors.hpp"
#include "wgym/common/rng.hpp"
#include "wgym/llm/tokens.hpp"

namespace wgym {

namespace {

std::string joined(const std::vector<LlmMessage>& messages) {
  std::string out;
  for (const auto& m : messages) {
    out += m.content;
    out += '\n';
  }
  return out;
}

std::string section(const std::string& text, const std::string& header) {
  auto start = text.rfind(header);
  if (start == std::string::npos) return {};
  start += header.size();
  auto end = text.find("\n# ", start);
  auto sub = text.find("\n## ", start);
  if (sub != std::string::npos && (end == std::string::npos || sub < end)) end = sub;
  return text.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

std::string heuristic_response(const std::vector<LlmMessage>& messages) {
  const std::string text = joined(messages);
  const std::string goal = section(text, "## Goal:");
  const std::string tree = section(text, "## AXTree:");
  static const std::regex kLine(R"(\[([^\]]+)\] (\S+) '([^']*)'.*clickable)");
  static const std::regex kQuoted("\"([^\"]+)\"");
  std::vector<std::pair<std::string, std::string>> clickable;  // bid, name
  for (std::sregex_iterator it(tree.begin(), tree.end(), kLine), end; it != end; ++it) {
    clickable.emplace_back((*it)[1], (*it)[3]);
  }
  if (clickable.empty()) {
    return "<think>\nNothing to click on this page.\n</think>\n\n<action>\nnoop()\n</action>";
  }
  for (std::sregex_iterator it(goal.begin(), goal.end(), kQuoted), end; it != end; ++it) {
    for (const auto& [bid, name] : clickable) {
      if (name == (*it)[1]) {
        return fmt::format(
            "<think>\nThe goal names \"{}\", which matches element {}.\n</think>\n\n<action>\n"
            "click('{}')\n</action>",
            name, bid, bid);
      }
    }
  }
  const auto& pick = clickable[stable_hash(text) % clickable.size()];
  return fmt::format(
      "<think>\nNo element matches the goal directly; trying {}.\n</think>\n\n<action>\n"
      "click('{}')\n</action>",
      pick.first, pick.first);
}

}  // namespace

ScriptedModel::ScriptedModel(std::vector<ScriptRule> script, ModelArgs args)
    : args_(std::move(args)) {
  if (args_.model_name.empty()) args_.model_name = "scripted:inline";
  for (auto& r : script) {
    if (r.match) {
      matchers_.push_back(std::move(r));
    } else {
      queue_.push_back(std::move(r.response));
    }
  }
}

ScriptedModel::ScriptedModel(Responder responder, ModelArgs args)
    : args_(std::move(args)), responder_(std::move(responder)) {
  if (args_.model_name.empty()) args_.model_name = "scripted:inline";
}

Completion ScriptedModel::complete(const std::vector<LlmMessage>& messages) {
  if (messages.empty()) throw std::invalid_argument("complete: empty message list");
  std::string text;
  {
    std::lock_guard lock(mu_);
    ++calls_;
    if (responder_) {
      text = responder_(messages);
    } else {
      const std::string request = joined(messages);
      bool found = false;
      for (const auto& r : matchers_) {
        if (request.find(*r.match) != std::string::npos) {
          text = r.response;
          found = true;
          break;
        }
      }
      if (!found) {
        if (queue_.empty()) {
          throw ScriptExhausted(fmt::format("script of {} exhausted after {} calls",
                                            args_.model_name, calls_ - 1));
        }
        text = std::move(queue_.front());
        queue_.pop_front();
      }
    }
  }
  Completion c;
  c.usage = priced_usage(args_, estimate_prompt_tokens(messages),
                         static_cast<std::int64_t>(count_tokens(text)), true);
  c.text = std::move(text);
  return c;
}

std::size_t ScriptedModel::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::vector<ScriptRule> load_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model script " + path);
  try {
    nlohmann::json j;
    in >> j;
    std::vector<ScriptRule> rules;
    for (const auto& r : j) {
      ScriptRule rule;
      if (r.contains("match")) rule.match = r.at("match").get<std::string>();
      rule.response = r.at("response").get<std::string>();
      rules.push_back(std::move(rule));
    }
    return rules;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed model script " + path + ": " + e.what());
  }
}

std::unique_ptr<ChatModel> make_scripted_model(const ModelArgs& args) {
  const std::string script = args.model_name.substr(std::string_view("scripted:").size());
  if (script == "noop") {
    return std::make_unique<ScriptedModel>(
        [](const std::vector<LlmMessage>&) {
          return std::string("<think>\nWaiting.\n</think>\n\n<action>\nnoop()\n</action>");
        },
        args);
  }
  if (script == "heuristic") return std::make_unique<ScriptedModel>(heuristic_response, args);
  if (script.rfind("file=", 0) == 0) {
    return std::make_unique<ScriptedModel>(load_script(script.substr(5)), args);
  }
  throw ConfigError("unknown scripted model '" + args.model_name +
                    "' (expected scripted:noop, scripted:heuristic or scripted:file=PATH)");
}

}  // namespace wgym
