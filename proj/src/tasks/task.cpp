#include "wgym/tasks/task.hpp"

#include "wgym/common/errors.hpp"

namespace wgym {

std::string_view to_string(SeedDiversity d) {
  switch (d) {
    case SeedDiversity::none:
      return "none";
    case SeedDiversity::medium:
      return "medium";
    case SeedDiversity::high:
      return "high";
  }
  return "none";
}

SeedDiversity seed_diversity_from_string(std::string_view name) {
  if (name == "none") return SeedDiversity::none;
  if (name == "medium") return SeedDiversity::medium;
  if (name == "high") return SeedDiversity::high;
  throw ConfigError("unknown seed diversity '" + std::string(name) + "'");
}

void open_page(SimBrowser& browser, const std::string& url) {
  if (auto err = browser.execute(cmd::Goto{url}, 500)) {
    throw SetupError("cannot open " + url + ": " + err->message);
  }
}

void open_in_new_tab(SimBrowser& browser, const std::string& url) {
  if (auto err = browser.execute(cmd::NewTab{}, 500)) throw SetupError(err->message);
  open_page(browser, url);
}

PageModel preview_page(const std::string& url, const PageBuilder& builder, std::uint64_t seed) {
  PageModel page(url);
  builder(page, seed);
  page.assign_bids();
  return page;
}

std::string bid_of(const PageModel& page, const std::function<bool(const Node&)>& pred) {
  auto id = page.find_first(pred);
  if (!id || page.node(*id).bid.empty()) {
    throw SetupError("element not found on " + page.url());
  }
  return page.node(*id).bid;
}

std::string quote_arg(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  return out + "\"";
}

const ChatMessage* last_agent_message(const std::vector<ChatMessage>& chat) {
  for (auto it = chat.rbegin(); it != chat.rend(); ++it) {
    if (it->role == ChatRole::assistant || it->role == ChatRole::infeasible) return &*it;
  }
  return nullptr;
}

void to_json(nlohmann::json& j, const TaskSpec& spec) {
  j = nlohmann::json{{"id", spec.id},
                     {"template", spec.template_name},
                     {"seed_diversity", to_string(spec.seed_diversity)},
                     {"max_steps", spec.default_max_steps},
                     {"metadata", spec.metadata}};
}

void from_json(const nlohmann::json& j, TaskSpec& spec) {
  spec.id = j.at("id").get<std::string>();
  spec.template_name = j.value("template", spec.id);
  spec.seed_diversity = seed_diversity_from_string(j.value("seed_diversity", "none"));
  spec.default_max_steps = j.value("max_steps", 10);
  spec.metadata = j.value("metadata", std::map<std::string, std::string>{});
}

}  // namespace wgym
