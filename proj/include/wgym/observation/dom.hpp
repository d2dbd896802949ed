#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wgym/backend/page.hpp"

namespace wgym {

// Immutable copy of the page tree. Elements carry their bid both in `bid`
// and as a "bid" attribute; text nodes (tag "#text") carry neither.
struct DomNode {
  std::string bid;
  std::string tag;
  Attributes attributes;
  std::string text;
  std::vector<DomNode> children;

  bool is_text() const { return tag == kTextTag; }
  const std::string* attr(std::string_view name) const;

  bool operator==(const DomNode&) const = default;
};

// Gives bids to nodes that lack one, then copies the tree.
DomNode snapshot_dom(PageModel& page);

// Copy of `dom` without the bid attribute and bid fields.
DomNode strip_bids(const DomNode& dom);

// Whitespace-collapsed text of the node and its descendants.
std::string dom_text_content(const DomNode& dom);

void to_json(nlohmann::json& j, const DomNode& node);
void from_json(const nlohmann::json& j, DomNode& node);

}  // namespace wgym
