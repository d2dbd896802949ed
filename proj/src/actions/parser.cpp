#include "wgym/actions/parser.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fmt/format.h>

#include "wgym/common/errors.hpp"

namespace wgym {

std::string_view to_string(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::syntax:
      return "syntax";
    case ParseError::Kind::unknown_primitive:
      return "unknown_primitive";
    case ParseError::Kind::disabled_primitive:
      return "disabled_primitive";
    case ParseError::Kind::arity:
      return "arity";
    case ParseError::Kind::type:
      return "type";
    case ParseError::Kind::multiple_actions:
      return "multiple_actions";
  }
  return "";
}

std::vector<std::string> ParsedAction::strings(std::size_t i) const {
  const auto& v = args.at(i);
  if (const auto* s = std::get_if<std::string>(&v)) return {*s};
  return std::get<std::vector<std::string>>(v);
}

bool ParsedAction::operator==(const ParsedAction& other) const {
  const bool same_primitive = primitive == other.primitive ||
                              (primitive && other.primitive && primitive->name == other.primitive->name);
  return same_primitive && args == other.args;
}

namespace {

using Kind = ParseError::Kind;

struct Scalar {
  enum class Type { string, number, ident };
  Type type = Type::string;
  std::string text;  // string contents or identifier
  double number = 0;
};

struct RawValue {
  bool is_list = false;
  Scalar scalar;
  std::vector<Scalar> items;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct RawArg {
  std::optional<std::string> keyword;
  RawValue value;
  std::size_t begin = 0;
};

struct RawCall {
  std::string name;
  std::size_t name_begin = 0;
  std::size_t name_end = 0;
  std::vector<RawArg> args;
};

struct Failure {
  ParseError error;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string describe_char(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return "end of input";
  const char c = text[pos];
  if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f) {
    return fmt::format("byte 0x{:02x}", static_cast<unsigned char>(c));
  }
  return fmt::format("'{}'", c);
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : t_(text) {}

  RawCall call() {
    skip_ws();
    RawCall out;
    out.name_begin = pos_;
    if (pos_ >= t_.size()) fail(Kind::syntax, "empty action, expected a function call such as noop()");
    if (!is_ident_start(t_[pos_])) fail(Kind::syntax, "expected an action name, found " + describe_char(t_, pos_));
    out.name = ident();
    out.name_end = pos_;
    skip_ws();
    expect('(', "after the action name");
    skip_ws();
    bool seen_keyword = false;
    if (peek() != ')') {
      while (true) {
        skip_ws();
        RawArg arg;
        arg.begin = pos_;
        if (pos_ < t_.size() && is_ident_start(t_[pos_])) {
          const std::size_t save = pos_;
          std::string name = ident();
          skip_ws();
          if (peek() == '=') {
            ++pos_;
            skip_ws();
            arg.keyword = std::move(name);
            seen_keyword = true;
          } else {
            pos_ = save;
          }
        }
        if (!arg.keyword && seen_keyword) {
          fail(Kind::syntax, "positional argument follows keyword argument", arg.begin);
        }
        arg.value = value();
        out.args.push_back(std::move(arg));
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          skip_ws();
          if (peek() == ')') break;
          continue;
        }
        break;
      }
    }
    skip_ws();
    expect(')', "to close the argument list");
    const std::size_t after = pos_;
    skip_ws();
    if (pos_ < t_.size()) {
      std::size_t p = pos_;
      if (t_[p] == ';') {
        ++p;
        while (p < t_.size() && std::isspace(static_cast<unsigned char>(t_[p]))) ++p;
      }
      std::size_t q = p;
      while (q < t_.size() && is_ident_char(t_[q])) ++q;
      std::size_t r = q;
      while (r < t_.size() && std::isspace(static_cast<unsigned char>(t_[r]))) ++r;
      if (q > p && is_ident_start(t_[p]) && r < t_.size() && t_[r] == '(') {
        throw Failure{{Kind::multiple_actions,
                       "only a single action can be provided at once, found a second call "
                       "starting at offset " + std::to_string(p),
                       {p, t_.size()}}};
      }
      throw Failure{{Kind::syntax,
                     "unexpected text after the action call at offset " + std::to_string(pos_) +
                         ": " + describe_char(t_, pos_),
                     {after, t_.size()}}};
    }
    return out;
  }

 private:
  [[noreturn]] void fail(Kind kind, std::string message, std::optional<std::size_t> at = {}) {
    const std::size_t b = std::min(at.value_or(pos_), t_.size());
    const std::size_t e = std::min(b + 1, t_.size());
    throw Failure{{kind, message + " (offset " + std::to_string(b) + ")", {b, e}}};
  }

  char peek() const { return pos_ < t_.size() ? t_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[pos_]))) ++pos_;
  }

  void expect(char c, std::string_view where) {
    if (peek() != c || pos_ >= t_.size()) {
      fail(Kind::syntax, fmt::format("expected '{}' {}, found {}", c, where, describe_char(t_, pos_)));
    }
    ++pos_;
  }

  std::string ident() {
    const std::size_t b = pos_;
    while (pos_ < t_.size() && is_ident_char(t_[pos_])) ++pos_;
    return std::string(t_.substr(b, pos_ - b));
  }

  RawValue value() {
    RawValue v;
    v.begin = pos_;
    if (peek() == '[' && pos_ < t_.size()) {
      ++pos_;
      v.is_list = true;
      skip_ws();
      if (peek() != ']') {
        while (true) {
          skip_ws();
          if (peek() == '[') fail(Kind::syntax, "nested lists are not supported");
          v.items.push_back(scalar());
          skip_ws();
          if (peek() == ',') {
            ++pos_;
            skip_ws();
            if (peek() == ']') break;
            continue;
          }
          break;
        }
      }
      skip_ws();
      expect(']', "to close the list");
    } else {
      v.scalar = scalar();
    }
    v.end = pos_;
    return v;
  }

  Scalar scalar() {
    Scalar s;
    const char c = peek();
    if (pos_ >= t_.size()) fail(Kind::syntax, "expected a value, found end of input");
    if (c == '\'' || c == '"') {
      s.type = Scalar::Type::string;
      s.text = string_literal();
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      s.type = Scalar::Type::number;
      s.number = number_literal();
    } else if (is_ident_start(c)) {
      s.type = Scalar::Type::ident;
      s.text = ident();
    } else {
      fail(Kind::syntax, "expected a value, found " + describe_char(t_, pos_));
    }
    return s;
  }

  std::string string_literal() {
    const char quote = t_[pos_];
    const std::size_t start = pos_;
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= t_.size()) fail(Kind::syntax, "unterminated string literal", start);
      const char c = t_[pos_];
      if (c == quote) {
        ++pos_;
        return out;
      }
      if (c == '\\') {
        if (pos_ + 1 >= t_.size()) fail(Kind::syntax, "unterminated string literal", start);
        const char e = t_[pos_ + 1];
        switch (e) {
          case 'n':
            out += '\n';
            break;
          case 't':
            out += '\t';
            break;
          case '"':
            out += '"';
            break;
          case '\'':
            out += '\'';
            break;
          case '\\':
            out += '\\';
            break;
          default:
            fail(Kind::syntax,
                 "unsupported escape sequence \\" + std::string(1, e) +
                     " (allowed: \\n, \\t, \\\", \\', \\\\)");
        }
        pos_ += 2;
        continue;
      }
      out += c;
      ++pos_;
    }
  }

  double number_literal() {
    const std::size_t b = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    std::size_t digits = 0;
    while (std::isdigit(static_cast<unsigned char>(peek())) && pos_ < t_.size()) {
      ++pos_;
      ++digits;
    }
    if (peek() == '.' && pos_ < t_.size()) {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek())) && pos_ < t_.size()) {
        ++pos_;
        ++digits;
      }
    }
    if (digits == 0) fail(Kind::syntax, "malformed number", b);
    if ((peek() == 'e' || peek() == 'E') && pos_ < t_.size()) {
      std::size_t p = pos_ + 1;
      if (p < t_.size() && (t_[p] == '-' || t_[p] == '+')) ++p;
      std::size_t exp_digits = 0;
      while (p < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p]))) {
        ++p;
        ++exp_digits;
      }
      if (exp_digits == 0) fail(Kind::syntax, "malformed number exponent", b);
      pos_ = p;
    }
    const std::string text(t_.substr(b, pos_ - b));
    const double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v)) fail(Kind::syntax, "number out of range: " + text, b);
    return v;
  }

  std::string_view t_;
  std::size_t pos_ = 0;
};

std::string type_name(ParamType t) {
  switch (t) {
    case ParamType::string:
      return "a string";
    case ParamType::number:
      return "a number";
    case ParamType::integer:
      return "an integer";
    case ParamType::string_or_list:
      return "a string or a list of strings";
    case ParamType::mouse_button:
      return "one of 'left', 'middle', 'right'";
    case ParamType::modifier_list:
      return "a list of modifiers among 'Alt', 'Control', 'ControlOrMeta', 'Meta', 'Shift'";
  }
  return "";
}

[[noreturn]] void type_fail(const ActionPrimitive& p, const ActionParam& param, const RawValue& v) {
  throw Failure{{Kind::type,
                 fmt::format("argument '{}' of {} must be {}", param.name, p.name, type_name(param.type)),
                 {v.begin, v.end}}};
}

bool in(const std::vector<std::string>& set, const std::string& s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

ActionValue convert(const ActionPrimitive& p, const ActionParam& param, const RawValue& v) {
  using T = Scalar::Type;
  switch (param.type) {
    case ParamType::string:
      if (v.is_list || v.scalar.type != T::string) type_fail(p, param, v);
      return v.scalar.text;
    case ParamType::number:
      if (v.is_list || v.scalar.type != T::number) type_fail(p, param, v);
      return v.scalar.number;
    case ParamType::integer:
      if (v.is_list || v.scalar.type != T::number || std::floor(v.scalar.number) != v.scalar.number) {
        type_fail(p, param, v);
      }
      return v.scalar.number;
    case ParamType::string_or_list: {
      if (!v.is_list) {
        if (v.scalar.type != T::string) type_fail(p, param, v);
        return v.scalar.text;
      }
      std::vector<std::string> out;
      for (const auto& item : v.items) {
        if (item.type != T::string) type_fail(p, param, v);
        out.push_back(item.text);
      }
      return out;
    }
    case ParamType::mouse_button:
      if (v.is_list || v.scalar.type == T::number || !in(mouse_button_literals(), v.scalar.text)) {
        type_fail(p, param, v);
      }
      return EnumLiteral{v.scalar.text};
    case ParamType::modifier_list: {
      if (!v.is_list) type_fail(p, param, v);
      std::vector<std::string> out;
      for (const auto& item : v.items) {
        if (item.type == T::number || !in(modifier_literals(), item.text)) type_fail(p, param, v);
        out.push_back(item.text);
      }
      return out;
    }
  }
  type_fail(p, param, v);
}

ActionValue default_value(const ActionParam& param) {
  switch (param.type) {
    case ParamType::mouse_button: {
      std::string d = *param.default_text;
      return EnumLiteral{d.substr(1, d.size() - 2)};
    }
    case ParamType::modifier_list:
      return std::vector<std::string>{};
    case ParamType::number:
    case ParamType::integer:
      return std::strtod(param.default_text->c_str(), nullptr);
    default: {
      std::string d = *param.default_text;
      return d.size() >= 2 ? d.substr(1, d.size() - 2) : d;
    }
  }
}

std::string enabled_list(const std::vector<const ActionPrimitive*>& enabled) {
  std::string out;
  for (const auto* p : enabled) out += (out.empty() ? "" : ", ") + p->name;
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      default:
        out += c;
    }
  }
  return out + "\"";
}

std::string render_number(double v) {
  if (v == 0) return "0";
  return fmt::format("{}", v);
}

std::string render(const ActionValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return quote(*s);
  if (const auto* d = std::get_if<double>(&v)) return render_number(*d);
  if (const auto* e = std::get_if<EnumLiteral>(&v)) return quote(e->value);
  const auto& list = std::get<std::vector<std::string>>(v);
  std::string out = "[";
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) out += ", ";
    out += quote(list[i]);
  }
  return out + "]";
}

}  // namespace

ActionSet::ActionSet(ActionSetConfig config) : config_(std::move(config)) {
  if (config_.multi_action) {
    throw ConfigError("multi_action is not supported: only one action per step can be executed");
  }
  if (config_.enabled_overrides) {
    for (const auto& name : *config_.enabled_overrides) {
      if (!find_primitive(name)) throw ConfigError("unknown action primitive '" + name + "'");
    }
    for (const auto& p : catalog()) {
      if (in(*config_.enabled_overrides, p.name)) enabled_.push_back(&p);
    }
  } else {
    for (const auto& p : catalog()) {
      if (config_.enabled_categories.count(p.category)) enabled_.push_back(&p);
    }
  }
  if (enabled_.empty()) throw ConfigError("the action set enables no primitives");
}

bool ActionSet::is_enabled(std::string_view name) const {
  return std::any_of(enabled_.begin(), enabled_.end(),
                     [&](const ActionPrimitive* p) { return p->name == name; });
}

ParseResult ActionSet::parse(std::string_view text) const {
  try {
    RawCall call = Lexer(text).call();
    const ActionPrimitive* prim = find_primitive(call.name);
    const std::pair<std::size_t, std::size_t> name_span{call.name_begin, call.name_end};
    if (!prim) {
      return ParseError{Kind::unknown_primitive,
                        fmt::format("unknown action '{}'; available actions: {}", call.name,
                                    enabled_list(enabled_)),
                        name_span};
    }
    if (!is_enabled(prim->name)) {
      return ParseError{Kind::disabled_primitive,
                        fmt::format("action '{}' is not enabled; available actions: {}", call.name,
                                    enabled_list(enabled_)),
                        name_span};
    }
    const auto n_positional = static_cast<std::size_t>(std::count_if(
        call.args.begin(), call.args.end(), [](const auto& a) { return !a.keyword; }));
    if (n_positional > prim->params.size()) {
      const auto& extra = call.args[prim->params.size()];
      return ParseError{Kind::arity,
                        fmt::format("{}() takes {} argument{} but {} were given; signature: {}",
                                    prim->name, prim->params.size(),
                                    prim->params.size() == 1 ? "" : "s", n_positional,
                                    prim->signature()),
                        {extra.begin, extra.value.end}};
    }
    std::vector<std::optional<ActionValue>> bound(prim->params.size());
    std::size_t positional = 0;
    for (const auto& arg : call.args) {
      std::size_t index = 0;
      if (arg.keyword) {
        const auto it = std::find_if(prim->params.begin(), prim->params.end(),
                                     [&](const ActionParam& p) { return p.name == *arg.keyword; });
        if (it == prim->params.end()) {
          return ParseError{Kind::arity,
                            fmt::format("{}() got an unexpected keyword argument '{}'; signature: {}",
                                        prim->name, *arg.keyword, prim->signature()),
                            {arg.begin, arg.value.end}};
        }
        index = static_cast<std::size_t>(it - prim->params.begin());
        if (bound[index]) {
          return ParseError{Kind::arity,
                            fmt::format("{}() got multiple values for argument '{}'", prim->name,
                                        *arg.keyword),
                            {arg.begin, arg.value.end}};
        }
      } else {
        index = positional++;
        if (index >= prim->params.size()) {
          return ParseError{Kind::arity,
                            fmt::format("{}() takes {} argument{} but {} were given; signature: {}",
                                        prim->name, prim->params.size(),
                                        prim->params.size() == 1 ? "" : "s", call.args.size(),
                                        prim->signature()),
                            {arg.begin, arg.value.end}};
        }
      }
      bound[index] = convert(*prim, prim->params[index], arg.value);
    }
    ParsedAction out;
    out.primitive = prim;
    out.raw_text = std::string(text);
    for (std::size_t i = 0; i < prim->params.size(); ++i) {
      if (bound[i]) {
        out.args.push_back(std::move(*bound[i]));
      } else if (prim->params[i].required()) {
        return ParseError{Kind::arity,
                          fmt::format("{}() missing required argument '{}'; signature: {}",
                                      prim->name, prim->params[i].name, prim->signature()),
                          name_span};
      } else {
        out.args.push_back(default_value(prim->params[i]));
      }
    }
    return out;
  } catch (const Failure& f) {
    return f.error;
  }
}

ParseResult parse_action(std::string_view text, const ActionSetConfig& config) {
  return ActionSet(config).parse(text);
}

std::string canonical_text(const ParsedAction& action) {
  const auto& prim = *action.primitive;
  std::string out = prim.name + "(";
  bool first = true;
  for (std::size_t i = 0; i < prim.params.size(); ++i) {
    const auto& param = prim.params[i];
    const auto& v = action.args.at(i);
    if (!param.required()) {
      if (v == default_value(param)) continue;
    }
    if (!first) out += ", ";
    first = false;
    if (!param.required()) out += param.name + "=";
    out += render(v);
  }
  return out + ")";
}

}  // namespace wgym
