#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgym/backend/browser.hpp"
#include "wgym/common/chat.hpp"
#include "wgym/observation/axtree.hpp"
#include "wgym/observation/dom.hpp"
#include "wgym/observation/props.hpp"

namespace wgym {

struct Observation {
  Goal goal_object;
  std::vector<ChatMessage> chat_messages;
  std::vector<std::string> open_pages_urls;
  std::vector<std::string> open_pages_titles;
  std::size_t active_page_index = 0;
  DomNode dom;
  AXNode axtree;
  PropsMap extra_element_properties;
  std::optional<std::string> focused_element_bid;
  std::string last_action_error;

  bool operator==(const Observation&) const = default;
};

// Snapshots the active page (assigning bids to new nodes) and assembles the
// rest from the tab set and episode state.
Observation build_observation(BrowserBackend& browser, const Goal& goal,
                              const std::vector<ChatMessage>& chat,
                              const std::string& last_action_error);

void to_json(nlohmann::json& j, const Observation& obs);
void from_json(const nlohmann::json& j, Observation& obs);

}  // namespace wgym
