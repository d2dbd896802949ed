#include "wgym/observation/observation.hpp"

namespace wgym {

Observation build_observation(BrowserBackend& browser, const Goal& goal,
                              const std::vector<ChatMessage>& chat,
                              const std::string& last_action_error) {
  Observation obs;
  obs.goal_object = goal;
  obs.chat_messages = chat;
  const auto& tabs = browser.tabs();
  for (const auto& tab : tabs.tabs) {
    obs.open_pages_urls.push_back(tab.page.url());
    obs.open_pages_titles.push_back(tab.page.title());
  }
  obs.active_page_index = tabs.active_index;
  PageModel& page = browser.active_page();
  obs.dom = snapshot_dom(page);
  obs.extra_element_properties = compute_extra_props(page, page.viewport());
  if (auto f = page.focused(); f && page.contains(*f)) obs.focused_element_bid = page.node(*f).bid;
  obs.axtree = derive_axtree(obs.dom, obs.extra_element_properties, obs.focused_element_bid);
  obs.last_action_error = last_action_error;
  return obs;
}

void to_json(nlohmann::json& j, const Observation& obs) {
  auto props = nlohmann::json::object();
  for (const auto& [bid, p] : obs.extra_element_properties) props[bid] = p;
  j = nlohmann::json{{"goal_object", obs.goal_object},
                     {"chat_messages", obs.chat_messages},
                     {"open_pages_urls", obs.open_pages_urls},
                     {"open_pages_titles", obs.open_pages_titles},
                     {"active_page_index", obs.active_page_index},
                     {"dom", obs.dom},
                     {"axtree", obs.axtree},
                     {"extra_element_properties", props},
                     {"focused_element_bid", obs.focused_element_bid
                                                 ? nlohmann::json(*obs.focused_element_bid)
                                                 : nlohmann::json(nullptr)},
                     {"last_action_error", obs.last_action_error}};
}

void from_json(const nlohmann::json& j, Observation& obs) {
  obs.goal_object = j.at("goal_object").get<Goal>();
  obs.chat_messages = j.at("chat_messages").get<std::vector<ChatMessage>>();
  obs.open_pages_urls = j.at("open_pages_urls").get<std::vector<std::string>>();
  obs.open_pages_titles = j.at("open_pages_titles").get<std::vector<std::string>>();
  obs.active_page_index = j.at("active_page_index").get<std::size_t>();
  obs.dom = j.at("dom").get<DomNode>();
  obs.axtree = j.at("axtree").get<AXNode>();
  obs.extra_element_properties.clear();
  for (auto it = j.at("extra_element_properties").begin();
       it != j.at("extra_element_properties").end(); ++it) {
    obs.extra_element_properties[it.key()] = it.value().get<ExtraProps>();
  }
  const auto& f = j.at("focused_element_bid");
  obs.focused_element_bid = f.is_null() ? std::nullopt : std::optional(f.get<std::string>());
  obs.last_action_error = j.at("last_action_error").get<std::string>();
}

}  // namespace wgym
