#include "wgym/backend/commands.hpp"

#include <stdexcept>

namespace wgym {

using nlohmann::json;

std::string_view to_string(MouseButton button) {
  switch (button) {
    case MouseButton::left:
      return "left";
    case MouseButton::middle:
      return "middle";
    case MouseButton::right:
      return "right";
  }
  return "left";
}

std::optional<MouseButton> mouse_button_from_string(std::string_view name) {
  if (name == "left") return MouseButton::left;
  if (name == "middle") return MouseButton::middle;
  if (name == "right") return MouseButton::right;
  return std::nullopt;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json target_json(const Target& t) {
  return std::visit(overloaded{[](const BidTarget& b) { return json{{"bid", b.bid}}; },
                               [](const PointTarget& p) { return json{{"x", p.x}, {"y", p.y}}; }},
                    t);
}

Target target_from(const json& j) {
  if (j.contains("bid")) return BidTarget{j.at("bid").get<std::string>()};
  return PointTarget{j.at("x").get<double>(), j.at("y").get<double>()};
}

MouseButton button_from(const json& j) {
  const auto name = j.value("button", std::string("left"));
  auto b = mouse_button_from_string(name);
  if (!b) throw std::invalid_argument("unknown mouse button '" + name + "'");
  return *b;
}

std::string_view keyboard_kind(cmd::KeyboardOp::Kind k) {
  switch (k) {
    case cmd::KeyboardOp::Kind::down:
      return "down";
    case cmd::KeyboardOp::Kind::up:
      return "up";
    case cmd::KeyboardOp::Kind::press:
      return "press";
    case cmd::KeyboardOp::Kind::type:
      return "type";
    case cmd::KeyboardOp::Kind::insert_text:
      return "insert_text";
  }
  return "press";
}

cmd::KeyboardOp::Kind keyboard_kind_from(std::string_view s) {
  if (s == "down") return cmd::KeyboardOp::Kind::down;
  if (s == "up") return cmd::KeyboardOp::Kind::up;
  if (s == "press") return cmd::KeyboardOp::Kind::press;
  if (s == "type") return cmd::KeyboardOp::Kind::type;
  if (s == "insert_text") return cmd::KeyboardOp::Kind::insert_text;
  throw std::invalid_argument("unknown keyboard op '" + std::string(s) + "'");
}

}  // namespace

std::string_view command_kind(const BackendCommand& command) {
  return std::visit(
      overloaded{[](const cmd::Click&) { return std::string_view("click"); },
                 [](const cmd::Fill&) { return std::string_view("fill"); },
                 [](const cmd::Clear&) { return std::string_view("clear"); },
                 [](const cmd::SelectOption&) { return std::string_view("select_option"); },
                 [](const cmd::Press&) { return std::string_view("press"); },
                 [](const cmd::Focus&) { return std::string_view("focus"); },
                 [](const cmd::Hover&) { return std::string_view("hover"); },
                 [](const cmd::DragAndDrop&) { return std::string_view("drag_and_drop"); },
                 [](const cmd::UploadFile&) { return std::string_view("upload_file"); },
                 [](const cmd::MouseMove&) { return std::string_view("mouse_move"); },
                 [](const cmd::MouseButtonOp&) { return std::string_view("mouse_button"); },
                 [](const cmd::KeyboardOp&) { return std::string_view("keyboard"); },
                 [](const cmd::Scroll&) { return std::string_view("scroll"); },
                 [](const cmd::Goto&) { return std::string_view("goto"); },
                 [](const cmd::GoBack&) { return std::string_view("go_back"); },
                 [](const cmd::GoForward&) { return std::string_view("go_forward"); },
                 [](const cmd::NewTab&) { return std::string_view("new_tab"); },
                 [](const cmd::TabClose&) { return std::string_view("tab_close"); },
                 [](const cmd::TabFocus&) { return std::string_view("tab_focus"); },
                 [](const cmd::Wait&) { return std::string_view("wait"); },
                 [](const cmd::AppendChat&) { return std::string_view("append_chat"); },
                 [](const cmd::RequestTermination&) {
                   return std::string_view("request_termination");
                 }},
      command);
}

json to_json(const BackendCommand& command) {
  json j = std::visit(
      overloaded{
          [](const cmd::Click& c) {
            return json{{"target", target_json(c.target)},
                        {"button", to_string(c.button)},
                        {"modifiers", c.modifiers},
                        {"count", c.count}};
          },
          [](const cmd::Fill& c) { return json{{"target", target_json(c.target)}, {"value", c.value}}; },
          [](const cmd::Clear& c) { return json{{"target", target_json(c.target)}}; },
          [](const cmd::SelectOption& c) {
            return json{{"target", target_json(c.target)}, {"options", c.options}};
          },
          [](const cmd::Press& c) {
            return json{{"target", target_json(c.target)}, {"key_comb", c.key_comb}};
          },
          [](const cmd::Focus& c) { return json{{"target", target_json(c.target)}}; },
          [](const cmd::Hover& c) { return json{{"target", target_json(c.target)}}; },
          [](const cmd::DragAndDrop& c) {
            return json{{"from", target_json(c.from)}, {"to", target_json(c.to)}};
          },
          [](const cmd::UploadFile& c) {
            return json{{"target", target_json(c.target)}, {"files", c.files}};
          },
          [](const cmd::MouseMove& c) { return json{{"x", c.x}, {"y", c.y}}; },
          [](const cmd::MouseButtonOp& c) {
            return json{{"x", c.x}, {"y", c.y}, {"button", to_string(c.button)}, {"down", c.down}};
          },
          [](const cmd::KeyboardOp& c) { return json{{"op", keyboard_kind(c.kind)}, {"text", c.text}}; },
          [](const cmd::Scroll& c) { return json{{"dx", c.dx}, {"dy", c.dy}}; },
          [](const cmd::Goto& c) { return json{{"url", c.url}}; },
          [](const cmd::GoBack&) { return json::object(); },
          [](const cmd::GoForward&) { return json::object(); },
          [](const cmd::NewTab&) { return json::object(); },
          [](const cmd::TabClose&) { return json::object(); },
          [](const cmd::TabFocus& c) { return json{{"index", c.index}}; },
          [](const cmd::Wait& c) { return json{{"ms", c.ms}}; },
          [](const cmd::AppendChat& c) { return json{{"role", to_string(c.role)}, {"text", c.text}}; },
          [](const cmd::RequestTermination&) { return json::object(); }},
      command);
  j["kind"] = command_kind(command);
  return j;
}

BackendCommand command_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "click") {
    return cmd::Click{target_from(j.at("target")), button_from(j),
                      j.value("modifiers", std::vector<std::string>{}), j.value("count", 1)};
  }
  if (kind == "fill") return cmd::Fill{target_from(j.at("target")), j.at("value").get<std::string>()};
  if (kind == "clear") return cmd::Clear{target_from(j.at("target"))};
  if (kind == "select_option") {
    return cmd::SelectOption{target_from(j.at("target")),
                             j.at("options").get<std::vector<std::string>>()};
  }
  if (kind == "press") {
    return cmd::Press{target_from(j.at("target")), j.at("key_comb").get<std::string>()};
  }
  if (kind == "focus") return cmd::Focus{target_from(j.at("target"))};
  if (kind == "hover") return cmd::Hover{target_from(j.at("target"))};
  if (kind == "drag_and_drop") return cmd::DragAndDrop{target_from(j.at("from")), target_from(j.at("to"))};
  if (kind == "upload_file") {
    return cmd::UploadFile{target_from(j.at("target")), j.at("files").get<std::vector<std::string>>()};
  }
  if (kind == "mouse_move") return cmd::MouseMove{j.at("x").get<double>(), j.at("y").get<double>()};
  if (kind == "mouse_button") {
    return cmd::MouseButtonOp{j.at("x").get<double>(), j.at("y").get<double>(), button_from(j),
                              j.at("down").get<bool>()};
  }
  if (kind == "keyboard") {
    return cmd::KeyboardOp{keyboard_kind_from(j.at("op").get<std::string>()),
                           j.at("text").get<std::string>()};
  }
  if (kind == "scroll") return cmd::Scroll{j.at("dx").get<double>(), j.at("dy").get<double>()};
  if (kind == "goto") return cmd::Goto{j.at("url").get<std::string>()};
  if (kind == "go_back") return cmd::GoBack{};
  if (kind == "go_forward") return cmd::GoForward{};
  if (kind == "new_tab") return cmd::NewTab{};
  if (kind == "tab_close") return cmd::TabClose{};
  if (kind == "tab_focus") return cmd::TabFocus{j.at("index").get<int>()};
  if (kind == "wait") return cmd::Wait{j.at("ms").get<double>()};
  if (kind == "append_chat") {
    return cmd::AppendChat{chat_role_from_string(j.at("role").get<std::string>()),
                           j.at("text").get<std::string>()};
  }
  if (kind == "request_termination") return cmd::RequestTermination{};
  throw std::invalid_argument("unknown backend command kind '" + kind + "'");
}

std::string_view to_string(CommandError::Kind kind) {
  switch (kind) {
    case CommandError::Kind::timeout:
      return "timeout";
    case CommandError::Kind::not_found:
      return "not_found";
    case CommandError::Kind::not_visible:
      return "not_visible";
    case CommandError::Kind::not_enabled:
      return "not_enabled";
    case CommandError::Kind::intercepted:
      return "intercepted";
    case CommandError::Kind::navigation_failed:
      return "navigation_failed";
    case CommandError::Kind::unsupported:
      return "unsupported";
  }
  return "timeout";
}

CommandError::Kind command_error_kind_from_string(std::string_view name) {
  using K = CommandError::Kind;
  for (K k : {K::timeout, K::not_found, K::not_visible, K::not_enabled, K::intercepted,
              K::navigation_failed, K::unsupported}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown command error kind '" + std::string(name) + "'");
}

json to_json(const CommandError& error) {
  return json{{"kind", to_string(error.kind)}, {"message", error.message}};
}

CommandError command_error_from_json(const json& j) {
  return CommandError{command_error_kind_from_string(j.at("kind").get<std::string>()),
                      j.at("message").get<std::string>()};
}

}  // namespace wgym
