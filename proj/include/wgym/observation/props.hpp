#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "wgym/backend/page.hpp"

namespace wgym {

struct ExtraProps {
  Box bbox;
  double visibility = 0;
  bool clickable = false;
  bool set_of_marks = false;

  bool operator==(const ExtraProps&) const = default;
};

using PropsMap = std::map<std::string, ExtraProps>;

// Interactivity rule shared with the AXTree: native controls, links with an
// href, elements with a click handler or an interactive role. Elements with
// an empty box are never clickable.
bool is_clickable(const PageModel& page, NodeId id);

// Props for every attached element with a bid, measured against `viewport`.
// Layout must be current.
PropsMap compute_extra_props(const PageModel& page, const Viewport& viewport);

void to_json(nlohmann::json& j, const ExtraProps& props);
void from_json(const nlohmann::json& j, ExtraProps& props);

}  // namespace wgym
