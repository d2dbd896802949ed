#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "wgym/common/chat.hpp"

namespace wgym {

struct BidTarget {
  std::string bid;
  bool operator==(const BidTarget&) const = default;
};

// Viewport (client) coordinates in pixels.
struct PointTarget {
  double x = 0;
  double y = 0;
  bool operator==(const PointTarget&) const = default;
};

using Target = std::variant<BidTarget, PointTarget>;

enum class MouseButton { left, middle, right };
std::string_view to_string(MouseButton button);
std::optional<MouseButton> mouse_button_from_string(std::string_view name);

namespace cmd {

struct Click {
  Target target;
  MouseButton button = MouseButton::left;
  std::vector<std::string> modifiers;
  int count = 1;  // 2 for a double click
  bool operator==(const Click&) const = default;
};
struct Fill {
  Target target;
  std::string value;
  bool operator==(const Fill&) const = default;
};
struct Clear {
  Target target;
  bool operator==(const Clear&) const = default;
};
struct SelectOption {
  Target target;
  std::vector<std::string> options;
  bool operator==(const SelectOption&) const = default;
};
struct Press {
  Target target;
  std::string key_comb;
  bool operator==(const Press&) const = default;
};
struct Focus {
  Target target;
  bool operator==(const Focus&) const = default;
};
struct Hover {
  Target target;
  bool operator==(const Hover&) const = default;
};
struct DragAndDrop {
  Target from;
  Target to;
  bool operator==(const DragAndDrop&) const = default;
};
struct UploadFile {
  Target target;
  std::vector<std::string> files;
  bool operator==(const UploadFile&) const = default;
};
struct MouseMove {
  double x = 0;
  double y = 0;
  bool operator==(const MouseMove&) const = default;
};
// Press (down=true) or release a mouse button at a location.
struct MouseButtonOp {
  double x = 0;
  double y = 0;
  MouseButton button = MouseButton::left;
  bool down = true;
  bool operator==(const MouseButtonOp&) const = default;
};
struct KeyboardOp {
  enum class Kind { down, up, press, type, insert_text };
  Kind kind = Kind::press;
  std::string text;
  bool operator==(const KeyboardOp&) const = default;
};
struct Scroll {
  double dx = 0;
  double dy = 0;
  bool operator==(const Scroll&) const = default;
};
struct Goto {
  std::string url;
  bool operator==(const Goto&) const = default;
};
struct GoBack {
  bool operator==(const GoBack&) const = default;
};
struct GoForward {
  bool operator==(const GoForward&) const = default;
};
struct NewTab {
  bool operator==(const NewTab&) const = default;
};
struct TabClose {
  bool operator==(const TabClose&) const = default;
};
struct TabFocus {
  int index = 0;
  bool operator==(const TabFocus&) const = default;
};
struct Wait {
  double ms = 0;
  bool operator==(const Wait&) const = default;
};
// Chat commands are executed by the environment, not the page backend.
struct AppendChat {
  ChatRole role = ChatRole::assistant;
  std::string text;
  bool operator==(const AppendChat&) const = default;
};
struct RequestTermination {
  bool operator==(const RequestTermination&) const = default;
};

}  // namespace cmd

using BackendCommand =
    std::variant<cmd::Click, cmd::Fill, cmd::Clear, cmd::SelectOption, cmd::Press, cmd::Focus,
                 cmd::Hover, cmd::DragAndDrop, cmd::UploadFile, cmd::MouseMove,
                 cmd::MouseButtonOp, cmd::KeyboardOp, cmd::Scroll, cmd::Goto, cmd::GoBack,
                 cmd::GoForward, cmd::NewTab, cmd::TabClose, cmd::TabFocus, cmd::Wait,
                 cmd::AppendChat, cmd::RequestTermination>;

// Kind tag used on the wire ("click", "fill", ...).
std::string_view command_kind(const BackendCommand& command);

struct CommandError {
  enum class Kind {
    timeout,
    not_found,
    not_visible,
    not_enabled,
    intercepted,
    navigation_failed,
    unsupported
  };
  Kind kind = Kind::timeout;
  std::string message;

  bool operator==(const CommandError&) const = default;
};

std::string_view to_string(CommandError::Kind kind);
CommandError::Kind command_error_kind_from_string(std::string_view name);

// JSON wire shapes: objects tagged with "kind".
nlohmann::json to_json(const BackendCommand& command);
BackendCommand command_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CommandError& error);
CommandError command_error_from_json(const nlohmann::json& j);

}  // namespace wgym
