#include "wgym/actions/catalog.hpp"

#include "wgym/common/errors.hpp"

namespace wgym {

std::string_view to_string(ActionCategory c) {
  switch (c) {
    case ActionCategory::bid:
      return "bid";
    case ActionCategory::coord:
      return "coord";
    case ActionCategory::tab:
      return "tab";
    case ActionCategory::nav:
      return "nav";
    case ActionCategory::misc:
      return "misc";
  }
  return "";
}

ActionCategory action_category_from_string(std::string_view name) {
  for (auto c : all_action_categories()) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown action category '" + std::string(name) +
                    "' (expected bid, coord, tab, nav or misc)");
}

std::set<ActionCategory> all_action_categories() {
  return {ActionCategory::bid, ActionCategory::coord, ActionCategory::tab, ActionCategory::nav,
          ActionCategory::misc};
}

const std::vector<std::string>& mouse_button_literals() {
  static const std::vector<std::string> kButtons = {"left", "middle", "right"};
  return kButtons;
}

const std::vector<std::string>& modifier_literals() {
  static const std::vector<std::string> kModifiers = {"Alt", "Control", "ControlOrMeta", "Meta",
                                                      "Shift"};
  return kModifiers;
}

namespace {

std::string type_text(ParamType t) {
  switch (t) {
    case ParamType::string:
      return "str";
    case ParamType::number:
      return "float";
    case ParamType::integer:
      return "int";
    case ParamType::string_or_list:
      return "str | list[str]";
    case ParamType::mouse_button:
      return "Literal['left', 'middle', 'right']";
    case ParamType::modifier_list:
      return "list[typing.Literal['Alt', 'Control', 'ControlOrMeta', 'Meta', 'Shift']]";
  }
  return "";
}

ActionParam req(std::string name, ParamType type) { return {std::move(name), type, std::nullopt}; }
ActionParam opt(std::string name, ParamType type, std::string dflt) {
  return {std::move(name), type, std::move(dflt)};
}

ActionParam button() { return opt("button", ParamType::mouse_button, "'left'"); }
ActionParam modifiers() { return opt("modifiers", ParamType::modifier_list, "[]"); }

std::vector<ActionPrimitive> build_catalog() {
  using C = ActionCategory;
  using T = ParamType;
  std::vector<ActionPrimitive> out;
  auto add = [&](std::string name, C cat, std::vector<ActionParam> params, std::string summary,
                 std::string long_description, std::vector<std::string> examples) {
    out.push_back(ActionPrimitive{std::move(name), cat, std::move(params), std::move(summary),
                                  std::move(long_description), std::move(examples)});
  };

  add("noop", C::misc, {opt("wait_ms", T::number, "1000")}, "Wait and do nothing.",
      "Does nothing for the given number of milliseconds, letting the page settle.",
      {"noop()", "noop(500)"});
  add("send_msg_to_user", C::misc, {req("text", T::string)}, "Send a message to the user in the chat.",
      "Posts a message to the user in the chat. Use it to answer questions or report results.",
      {"send_msg_to_user('The order was placed on March 3.')"});
  add("report_infeasible", C::misc, {req("reason", T::string)},
      "Send a special message in the chat and terminate.",
      "Tells the user the request cannot be carried out and ends the task.",
      {"report_infeasible('There is no field for a phone number on this form.')"});
  add("scroll", C::misc, {req("delta_x", T::number), req("delta_y", T::number)},
      "Scroll pixels in X and/or Y direction.",
      "Scrolls the page by the given pixel amounts. Positive values scroll right or down, "
      "negative values scroll left or up.",
      {"scroll(0, 200)", "scroll(-50.2, -100.5)"});

  add("fill", C::bid, {req("bid", T::string), req("value", T::string)},
      "Fill an input field with text.",
      "Focuses a text field and replaces its content with the given text, firing an input "
      "event. Works on <input>, <textarea> and [contenteditable] elements.",
      {"fill('237', 'example value')", "fill('45', 'multi-line\\nexample')",
       "fill('a12', 'example with \"quotes\"')"});
  add("select_option", C::bid, {req("bid", T::string), req("options", T::string_or_list)},
      "Select one or multiple options in a drop-down element.",
      "Selects options of a <select> element by value or by label.",
      {"select_option('a48', 'blue')", "select_option('c48', ['red', 'green', 'blue'])"});
  add("click", C::bid, {req("bid", T::string), button(), modifiers()}, "Click an element.",
      "Clicks an element with the given mouse button while holding the modifier keys.",
      {"click('a51')", "click('b22', button='right')",
       "click('48', button='middle', modifiers=['Shift'])"});
  add("dblclick", C::bid, {req("bid", T::string), button(), modifiers()},
      "Double-click an element.",
      "Double-clicks an element with the given mouse button while holding the modifier keys.",
      {"dblclick('12')", "dblclick('ca42', button='right')"});
  add("hover", C::bid, {req("bid", T::string)}, "Hover the mouse over an element.",
      "Moves the mouse pointer over the center of an element.", {"hover('b8')"});
  add("press", C::bid, {req("bid", T::string), req("key_comb", T::string)},
      "Focus an element and press a combination of keys.",
      "Focuses an element, then presses a key or a combination joined with '+', such as "
      "'Enter', 'Backspace' or 'Control+a'.",
      {"press('88', 'Backspace')", "press('a26', 'ControlOrMeta+a')", "press('a61', 'Meta+Shift+t')"});
  add("focus", C::bid, {req("bid", T::string)}, "Focus an element.",
      "Gives keyboard focus to an element.", {"focus('b455')"});
  add("clear", C::bid, {req("bid", T::string)}, "Clear an input field.",
      "Empties a text field.", {"clear('996')"});
  add("drag_and_drop", C::bid, {req("from_bid", T::string), req("to_bid", T::string)},
      "Drag and drop one element to another.",
      "Drags an element and drops it onto another element.", {"drag_and_drop('56', '498')"});
  add("upload_file", C::bid, {req("bid", T::string), req("file", T::string_or_list)},
      "Click a 'filechooser' element, then select one or multiple input files for upload.",
      "Attaches one or several files to a file input.",
      {"upload_file('572', 'my_receipt.pdf')",
       "upload_file('63', ['/home/bob/Documents/image.jpg', '/home/bob/Documents/file.zip'])"});

  add("mouse_move", C::coord, {req("x", T::number), req("y", T::number)},
      "Move the mouse to a location.",
      "Moves the mouse pointer to viewport coordinates, in pixels from the top left corner.",
      {"mouse_move(65.2, 158.5)"});
  add("mouse_down", C::coord, {req("x", T::number), req("y", T::number), button()},
      "Move the mouse then press and hold a button.",
      "Moves the mouse pointer to a location and presses a mouse button without releasing it.",
      {"mouse_down(140.2, 580.1)", "mouse_down(458, 254.5, button='middle')"});
  add("mouse_up", C::coord, {req("x", T::number), req("y", T::number), button()},
      "Move the mouse then release a button.",
      "Moves the mouse pointer to a location and releases a mouse button.",
      {"mouse_up(250, 120)", "mouse_up(47, 252, button='right')"});
  add("mouse_click", C::coord, {req("x", T::number), req("y", T::number), button()},
      "Move the mouse and click a button.",
      "Moves the mouse pointer to a location and clicks a mouse button.",
      {"mouse_click(887.2, 68)", "mouse_click(56, 712.56, button='right')"});
  add("mouse_dblclick", C::coord, {req("x", T::number), req("y", T::number), button()},
      "Move the mouse and double-click a button.",
      "Moves the mouse pointer to a location and double-clicks a mouse button.",
      {"mouse_dblclick(5, 236)", "mouse_dblclick(87.5, 354, button='right')"});
  add("mouse_drag_and_drop", C::coord,
      {req("from_x", T::number), req("from_y", T::number), req("to_x", T::number),
       req("to_y", T::number)},
      "Drag and drop from a location to a location.",
      "Presses the left button at one location, moves to another and releases it there.",
      {"mouse_drag_and_drop(10.7, 325, 235.6, 24.54)"});
  add("mouse_upload_file", C::coord, {req("x", T::number), req("y", T::number), req("file", T::string_or_list)},
      "Click a 'filechooser' location, then select one or multiple input files for upload.",
      "Attaches one or several files to the file input under a location.",
      {"mouse_upload_file(132.1, 547, 'my_receipt.pdf')",
       "mouse_upload_file(328, 812, ['/home/bob/Documents/image.jpg', "
       "'/home/bob/Documents/file.zip'])"});
  add("keyboard_down", C::coord, {req("key", T::string)}, "Press and holds a keyboard key.",
      "Presses a key and keeps it held until keyboard_up is called.",
      {"keyboard_down('Shift')", "keyboard_down('c')"});
  add("keyboard_up", C::coord, {req("key", T::string)}, "Release a keyboard key.",
      "Releases a key held with keyboard_down.", {"keyboard_up('Shift')", "keyboard_up('c')"});
  add("keyboard_press", C::coord, {req("key_comb", T::string)}, "Press a combination of keys.",
      "Presses a key or a '+'-joined combination on the focused element.",
      {"keyboard_press('Backspace')", "keyboard_press('ControlOrMeta+a')",
       "keyboard_press('Meta+Shift+t')", "keyboard_press('PageDown')"});
  add("keyboard_type", C::coord, {req("text", T::string)},
      "Types a string of text through the keyboard.",
      "Types text character by character into the focused element, one key event each.",
      {"keyboard_type('hello')", "keyboard_type('My name is Bob. I am a student.')"});
  add("keyboard_insert_text", C::coord, {req("text", T::string)},
      "Insert a string of text in the currently focused element.",
      "Inserts text into the focused element in one go, without key events.",
      {"keyboard_insert_text('Hello world!')"});

  add("tab_close", C::tab, {}, "Close the current tab.",
      "Closes the active tab; the tab before it becomes active.", {"tab_close()"});
  add("tab_focus", C::tab, {req("index", T::integer)}, "Bring a tab to front (activate tab).",
      "Activates the tab at the given zero-based index.", {"tab_focus(2)"});
  add("new_tab", C::tab, {}, "Open a new tab.", "Opens a blank tab and activates it.",
      {"new_tab()"});

  add("go_back", C::nav, {}, "Navigate to the previous page in history.",
      "Goes one page back in the history of the active tab.", {"go_back()"});
  add("go_forward", C::nav, {}, "Navigate to the next page in history.",
      "Goes one page forward in the history of the active tab.", {"go_forward()"});
  add("goto", C::nav, {req("url", T::string)}, "Navigate to a url.",
      "Loads a url in the active tab.", {"goto('http://www.example.com')"});
  return out;
}

}  // namespace

std::string ActionPrimitive::signature() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i].name + ": " + type_text(params[i].type);
    if (params[i].default_text) out += " = " + *params[i].default_text;
  }
  return out + ")";
}

const ActionParam* ActionPrimitive::param(std::string_view pname) const {
  for (const auto& p : params) {
    if (p.name == pname) return &p;
  }
  return nullptr;
}

const std::vector<ActionPrimitive>& catalog() {
  static const std::vector<ActionPrimitive> kCatalog = build_catalog();
  return kCatalog;
}

const ActionPrimitive* find_primitive(std::string_view name) {
  for (const auto& p : catalog()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace wgym
