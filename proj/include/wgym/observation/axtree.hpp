#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wgym/observation/dom.hpp"
#include "wgym/observation/props.hpp"

namespace wgym {

// Declaration order is the rendering order.
enum class AXProperty { clickable, visible, focused, disabled };

std::string_view to_string(AXProperty p);

inline constexpr double kVisibleThreshold = 0.5;

struct AXNode {
  std::optional<std::string> bid;
  std::string role;
  std::string name;
  std::set<AXProperty> properties;
  // Control state shown after the name: value, checked, selected.
  std::vector<std::pair<std::string, std::string>> states;
  std::vector<AXNode> children;
  std::optional<std::string> static_text;
  // Not rendered unless asked for; used by filters and coordinate output.
  std::optional<Box> bbox;
  bool set_of_marks = false;

  bool has(AXProperty p) const { return properties.count(p) > 0; }
  bool operator==(const AXNode&) const = default;
};

// Role for an element, from its explicit role attribute or the tag map.
std::string ax_role(const DomNode& node);

// The returned root stands for the document itself and is never rendered;
// its children are the top-level accessible nodes. Generic nodes without a
// name are transparent: their children take their place.
AXNode derive_axtree(const DomNode& dom, const PropsMap& props,
                     const std::optional<std::string>& focused_bid = std::nullopt,
                     double visible_threshold = kVisibleThreshold);

void to_json(nlohmann::json& j, const AXNode& node);
void from_json(const nlohmann::json& j, AXNode& node);

}  // namespace wgym
