#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wgym {

enum class ActionCategory { bid, coord, tab, nav, misc };

std::string_view to_string(ActionCategory c);
// Throws ConfigError for unknown names.
ActionCategory action_category_from_string(std::string_view name);
std::set<ActionCategory> all_action_categories();

enum class ParamType {
  string,       // str
  number,       // float
  integer,      // int
  string_or_list,  // str | list[str]
  mouse_button,    // Literal['left', 'middle', 'right']
  modifier_list,   // list[Literal['Alt', 'Control', 'ControlOrMeta', 'Meta', 'Shift']]
};

struct ActionParam {
  std::string name;
  ParamType type;
  // Canonical literal text of the default ("'left'", "[]", "1000").
  std::optional<std::string> default_text;

  bool required() const { return !default_text.has_value(); }
};

struct ActionPrimitive {
  std::string name;
  ActionCategory category;
  std::vector<ActionParam> params;
  std::string summary;
  std::string long_description;
  std::vector<std::string> usage_examples;

  // Python-style signature, e.g. "hover(bid: str)".
  std::string signature() const;
  const ActionParam* param(std::string_view name) const;
};

// Immutable, in description order: misc, bid, coord, tab, nav.
const std::vector<ActionPrimitive>& catalog();
const ActionPrimitive* find_primitive(std::string_view name);

const std::vector<std::string>& mouse_button_literals();
const std::vector<std::string>& modifier_literals();

}  // namespace wgym
