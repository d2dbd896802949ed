#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wgym/actions/catalog.hpp"

namespace wgym {

// A bare identifier or validated literal for an enumerated parameter.
struct EnumLiteral {
  std::string value;
  bool operator==(const EnumLiteral&) const = default;
};

using ActionValue = std::variant<std::string, double, std::vector<std::string>, EnumLiteral>;

struct ParsedAction {
  const ActionPrimitive* primitive = nullptr;
  // One value per catalog parameter, defaults filled in.
  std::vector<ActionValue> args;
  std::string raw_text;

  const std::string& name() const { return primitive->name; }
  const std::string& str(std::size_t i) const { return std::get<std::string>(args.at(i)); }
  double num(std::size_t i) const { return std::get<double>(args.at(i)); }
  const std::string& literal(std::size_t i) const { return std::get<EnumLiteral>(args.at(i)).value; }
  // Strings and string lists both come back as a list.
  std::vector<std::string> strings(std::size_t i) const;

  // Compares primitive and arguments; raw_text is ignored.
  bool operator==(const ParsedAction& other) const;
};

struct ParseError {
  enum class Kind { syntax, unknown_primitive, disabled_primitive, arity, type, multiple_actions };
  Kind kind = Kind::syntax;
  std::string message;
  std::pair<std::size_t, std::size_t> span{0, 0};

  bool operator==(const ParseError&) const = default;
};

std::string_view to_string(ParseError::Kind kind);

struct ActionSetConfig {
  std::set<ActionCategory> enabled_categories = all_action_categories();
  // When present, exactly these primitives are enabled.
  std::optional<std::vector<std::string>> enabled_overrides;
  bool multi_action = false;
  bool long_description = false;
  bool individual_examples = false;

  bool operator==(const ActionSetConfig&) const = default;
};

using ParseResult = std::variant<ParsedAction, ParseError>;

class ActionSet {
 public:
  // Throws ConfigError for an empty selection, unknown overrides, or
  // multi_action.
  explicit ActionSet(ActionSetConfig config = {});

  const ActionSetConfig& config() const { return config_; }
  const std::vector<const ActionPrimitive*>& enabled() const { return enabled_; }
  bool is_enabled(std::string_view name) const;

  ParseResult parse(std::string_view text) const;
  std::string describe() const;

 private:
  ActionSetConfig config_;
  std::vector<const ActionPrimitive*> enabled_;
};

ParseResult parse_action(std::string_view text, const ActionSetConfig& config);

// Positional required arguments, keywords for non-default optional ones,
// double-quoted strings.
std::string canonical_text(const ParsedAction& action);

}  // namespace wgym
