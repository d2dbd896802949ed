#include "wgym/actions/mapping.hpp"

#include <stdexcept>

namespace wgym {

namespace {

MouseButton button_of(const ParsedAction& a, std::size_t i) {
  return mouse_button_from_string(a.literal(i)).value_or(MouseButton::left);
}

std::vector<std::string> modifiers_of(const ParsedAction& a, std::size_t i) {
  return std::get<std::vector<std::string>>(a.args.at(i));
}

}  // namespace

std::vector<BackendCommand> map_to_commands(const ParsedAction& a) {
  using KOp = cmd::KeyboardOp::Kind;
  const std::string& n = a.name();
  if (n == "noop") return {cmd::Wait{a.num(0)}};
  if (n == "send_msg_to_user") return {cmd::AppendChat{ChatRole::assistant, a.str(0)}};
  if (n == "report_infeasible") {
    return {cmd::AppendChat{ChatRole::infeasible, a.str(0)}, cmd::RequestTermination{}};
  }
  if (n == "scroll") return {cmd::Scroll{a.num(0), a.num(1)}};

  if (n == "fill") return {cmd::Fill{BidTarget{a.str(0)}, a.str(1)}};
  if (n == "select_option") return {cmd::SelectOption{BidTarget{a.str(0)}, a.strings(1)}};
  if (n == "click" || n == "dblclick") {
    return {cmd::Click{BidTarget{a.str(0)}, button_of(a, 1), modifiers_of(a, 2), n == "click" ? 1 : 2}};
  }
  if (n == "hover") return {cmd::Hover{BidTarget{a.str(0)}}};
  if (n == "press") return {cmd::Press{BidTarget{a.str(0)}, a.str(1)}};
  if (n == "focus") return {cmd::Focus{BidTarget{a.str(0)}}};
  if (n == "clear") return {cmd::Clear{BidTarget{a.str(0)}}};
  if (n == "drag_and_drop") return {cmd::DragAndDrop{BidTarget{a.str(0)}, BidTarget{a.str(1)}}};
  if (n == "upload_file") return {cmd::UploadFile{BidTarget{a.str(0)}, a.strings(1)}};

  if (n == "mouse_move") return {cmd::MouseMove{a.num(0), a.num(1)}};
  if (n == "mouse_down") return {cmd::MouseButtonOp{a.num(0), a.num(1), button_of(a, 2), true}};
  if (n == "mouse_up") return {cmd::MouseButtonOp{a.num(0), a.num(1), button_of(a, 2), false}};
  if (n == "mouse_click" || n == "mouse_dblclick") {
    return {cmd::Click{PointTarget{a.num(0), a.num(1)}, button_of(a, 2), {},
                       n == "mouse_click" ? 1 : 2}};
  }
  if (n == "mouse_drag_and_drop") {
    return {cmd::DragAndDrop{PointTarget{a.num(0), a.num(1)}, PointTarget{a.num(2), a.num(3)}}};
  }
  if (n == "mouse_upload_file") {
    return {cmd::UploadFile{PointTarget{a.num(0), a.num(1)}, a.strings(2)}};
  }
  if (n == "keyboard_down") return {cmd::KeyboardOp{KOp::down, a.str(0)}};
  if (n == "keyboard_up") return {cmd::KeyboardOp{KOp::up, a.str(0)}};
  if (n == "keyboard_press") return {cmd::KeyboardOp{KOp::press, a.str(0)}};
  if (n == "keyboard_type") return {cmd::KeyboardOp{KOp::type, a.str(0)}};
  if (n == "keyboard_insert_text") return {cmd::KeyboardOp{KOp::insert_text, a.str(0)}};

  if (n == "new_tab") return {cmd::NewTab{}};
  if (n == "tab_close") return {cmd::TabClose{}};
  if (n == "tab_focus") return {cmd::TabFocus{static_cast<int>(a.num(0))}};
  if (n == "go_back") return {cmd::GoBack{}};
  if (n == "go_forward") return {cmd::GoForward{}};
  if (n == "goto") return {cmd::Goto{a.str(0)}};
  throw std::logic_error("no command mapping for action '" + n + "'");
}

}  // namespace wgym
