#include "wgym/observation/dom.hpp"

namespace wgym {

const std::string* DomNode::attr(std::string_view name) const {
  for (const auto& [k, v] : attributes) {
    if (k == name) return &v;
  }
  return nullptr;
}

namespace {

DomNode copy_node(const PageModel& page, NodeId id) {
  const auto& n = page.node(id);
  DomNode out;
  out.bid = n.bid;
  out.tag = n.tag;
  out.attributes = n.is_text() ? n.attributes : attributes_with_bid(n);
  out.text = n.text;
  out.children.reserve(n.children.size());
  for (NodeId c : n.children) out.children.push_back(copy_node(page, c));
  return out;
}

void collect_text(const DomNode& dom, std::string& out) {
  if (!dom.text.empty()) {
    if (!out.empty() && out.back() != ' ') out += ' ';
    for (char c : dom.text) {
      const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
      if (space) {
        if (!out.empty() && out.back() != ' ') out += ' ';
      } else {
        out += c;
      }
    }
  }
  for (const auto& c : dom.children) collect_text(c, out);
}

}  // namespace

DomNode snapshot_dom(PageModel& page) {
  page.assign_bids();
  return copy_node(page, page.root());
}

DomNode strip_bids(const DomNode& dom) {
  DomNode out;
  out.tag = dom.tag;
  out.text = dom.text;
  for (const auto& kv : dom.attributes) {
    if (kv.first != "bid") out.attributes.push_back(kv);
  }
  out.children.reserve(dom.children.size());
  for (const auto& c : dom.children) out.children.push_back(strip_bids(c));
  return out;
}

std::string dom_text_content(const DomNode& dom) {
  std::string out;
  collect_text(dom, out);
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

void to_json(nlohmann::json& j, const DomNode& node) {
  j = nlohmann::json{{"tag", node.tag}};
  if (!node.bid.empty()) j["bid"] = node.bid;
  if (!node.attributes.empty()) {
    auto attrs = nlohmann::json::array();
    for (const auto& [k, v] : node.attributes) attrs.push_back({k, v});
    j["attributes"] = attrs;
  }
  if (!node.text.empty()) j["text"] = node.text;
  if (!node.children.empty()) j["children"] = node.children;
}

void from_json(const nlohmann::json& j, DomNode& node) {
  node.tag = j.at("tag").get<std::string>();
  node.bid = j.value("bid", std::string());
  node.attributes.clear();
  if (j.contains("attributes")) {
    for (const auto& kv : j.at("attributes")) {
      node.attributes.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
    }
  }
  node.text = j.value("text", std::string());
  node.children = j.value("children", std::vector<DomNode>{});
}

}  // namespace wgym
