#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "wgym/backend/browser.hpp"
#include "wgym/common/chat.hpp"

namespace wgym {

enum class SeedDiversity { none, medium, high };

std::string_view to_string(SeedDiversity d);
SeedDiversity seed_diversity_from_string(std::string_view name);

struct TaskSpec {
  std::string id;
  std::string template_name;
  SeedDiversity seed_diversity = SeedDiversity::none;
  int default_max_steps = 10;
  // category, level, split, ...
  std::map<std::string, std::string> metadata;

  bool operator==(const TaskSpec&) const = default;
};

struct Validation {
  double reward = 0;
  bool done = false;
  std::optional<std::string> message;

  bool operator==(const Validation&) const = default;
};

class Task {
 public:
  virtual ~Task() = default;

  // Brings a fresh browser to the starting point and returns the goal.
  // Failures are reported as SetupError.
  virtual Goal setup(SimBrowser& browser, std::uint64_t seed) = 0;

  // Pure read of the page and chat, called after every step.
  virtual Validation validate(const SimBrowser& browser,
                              const std::vector<ChatMessage>& chat) const = 0;

  // A known solution for the instance built by the last setup() call, as
  // action strings. Only tests and the oracle agent read this.
  virtual std::vector<std::string> oracle_actions() const { return {}; }
};

// Loads `url` in the active tab; throws SetupError if it is not registered.
void open_page(SimBrowser& browser, const std::string& url);
void open_in_new_tab(SimBrowser& browser, const std::string& url);

// Builds a registered page offline and assigns its bids, the same way the
// browser does on navigation. Tasks use it to compute oracle bids for pages
// the agent has not reached yet.
PageModel preview_page(const std::string& url, const PageBuilder& builder, std::uint64_t seed);

// Bid of the first node matching `pred`; SetupError if none.
std::string bid_of(const PageModel& page, const std::function<bool(const Node&)>& pred);

// Quotes `text` the way the action grammar reads it back.
std::string quote_arg(std::string_view text);

// Last chat message sent by the agent (assistant or infeasible role).
const ChatMessage* last_agent_message(const std::vector<ChatMessage>& chat);

void to_json(nlohmann::json& j, const TaskSpec& spec);
void from_json(const nlohmann::json& j, TaskSpec& spec);

}  // namespace wgym
