#include "wgym/backend/browser.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <json.hpp>

#include "wgym/backend/layout.hpp"
#include "wgym/common/errors.hpp"

namespace wgym {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Kind = CommandError::Kind;

std::string resolved_tag(const PageModel& page, const Node& n) {
  std::string tag = start_tag(n);
  if (is_void_element(n.tag)) {
    tag.back() = ' ';
    return tag + "/>";
  }
  std::string text = page.text_content(n.id);
  if (text.size() > 40) text = text.substr(0, 40) + "...";
  return tag + escape_html_text(text) + "</" + n.tag + ">";
}

std::string timeout_header(std::string_view method, int timeout_ms, std::string_view bid) {
  return fmt::format(
      "TimeoutError: Locator.{}: Timeout {}ms exceeded.\nCall log:\nwaiting for "
      "get_by_test_id(\"{}\")",
      method, timeout_ms, bid);
}

std::string action_words(std::string_view method) {
  std::string out(method);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

NodeId owning_form(const PageModel& page, NodeId id) {
  std::optional<NodeId> cur = id;
  while (cur) {
    if (page.node(*cur).tag == "form") return *cur;
    cur = page.node(*cur).parent;
  }
  return page.root();
}

bool is_submit_control(const Node& n) {
  if (n.tag == "button") {
    const auto* type = n.attr("type");
    return !type || *type == "submit";
  }
  if (n.tag == "input") {
    const auto* type = n.attr("type");
    return type && (*type == "submit" || *type == "image");
  }
  return false;
}

std::string input_type(const Node& n) {
  const auto* t = n.attr("type");
  return t ? *t : "text";
}

std::string current_value(const PageModel& page, NodeId id) {
  const auto& n = page.node(id);
  if (n.has_attr("contenteditable")) return n.text;
  if (const auto* v = n.attr("value")) return *v;
  return {};
}

void write_value(PageModel& page, NodeId id, std::string value) {
  auto& n = page.node(id);
  if (n.has_attr("contenteditable")) {
    n.text = std::move(value);
  } else {
    page.set_attr(id, "value", std::move(value));
  }
}

// Removes the last UTF-8 code point.
void pop_code_point(std::string& s) {
  while (!s.empty()) {
    const unsigned char c = static_cast<unsigned char>(s.back());
    s.pop_back();
    if ((c & 0xC0) != 0x80) break;
  }
}

std::vector<std::string> split_code_points(std::string_view text) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < text.size();) {
    std::size_t len = 1;
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c >= 0xF0) {
      len = 4;
    } else if (c >= 0xE0) {
      len = 3;
    } else if (c >= 0xC0) {
      len = 2;
    }
    len = std::min(len, text.size() - i);
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

std::size_t code_point_count(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

struct KeyCombo {
  std::set<std::string> modifiers;
  std::string key;
};

KeyCombo parse_combo(std::string_view comb) {
  KeyCombo out;
  // A lone "+" (or a trailing "++") names the plus key itself.
  std::vector<std::string> parts;
  std::string cur;
  for (std::size_t i = 0; i < comb.size(); ++i) {
    if (comb[i] == '+' && !cur.empty()) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += comb[i];
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  if (parts.empty()) return out;
  out.key = parts.back();
  parts.pop_back();
  for (auto& p : parts) {
    if (p == "ControlOrMeta") p = "Control";
    out.modifiers.insert(p);
  }
  return out;
}

}  // namespace

// Executes one command against a SimBrowser. Lives in a class so the
// per-command helpers can share the timeout and browser state.
class CommandRunner {
 public:
  CommandRunner(SimBrowser& browser, int timeout_ms) : b_(browser), timeout_ms_(timeout_ms) {}

  std::optional<CommandError> run(const BackendCommand& command) {
    return std::visit([this](const auto& c) { return (*this)(c); }, command);
  }

  std::optional<CommandError> operator()(const cmd::Click& c) {
    const std::string method = c.count >= 2 ? "dblclick" : "click";
    NodeId id = 0;
    if (auto err = resolve_pointer(c.target, method, id)) return err;
    if (std::holds_alternative<PointTarget>(c.target) && page().node(id).has_attr("disabled")) {
      return std::nullopt;
    }
    activate(id, c.button, c.count);
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::Fill& c) { return fill(c.target, c.value, "fill"); }
  std::optional<CommandError> operator()(const cmd::Clear& c) { return fill(c.target, "", "clear"); }

  std::optional<CommandError> operator()(const cmd::SelectOption& c) {
    NodeId id = 0;
    if (auto err = resolve(c.target, "select_option", false, id)) return err;
    auto& p = page();
    const auto& sel = p.node(id);
    if (sel.tag != "select") {
      return CommandError{Kind::unsupported,
                          fmt::format("Error: Element is not a <select> element\nCall log:\n"
                                      "waiting for get_by_test_id(\"{}\")\n  -   locator resolved to {}",
                                      sel.bid, resolved_tag(p, sel))};
    }
    const auto options = p.find_all([&](const Node& n) {
      return n.tag == "option" && p.is_ancestor(id, n.id);
    });
    std::vector<NodeId> chosen;
    for (const auto& want : c.options) {
      std::optional<NodeId> match;
      for (NodeId o : options) {
        const auto value = p.attr(o, "value");
        if ((value && *value == want) || p.text_content(o) == want) {
          match = o;
          break;
        }
      }
      if (!match) {
        b_.clock_ms_ += timeout_ms_;
        return CommandError{
            Kind::timeout,
            timeout_header("select_option", timeout_ms_, sel.bid) + "\n  -   locator resolved to " +
                resolved_tag(p, sel) + "\n  - attempting select option action\n" +
                "  -   waiting for element to be visible and enabled\n" +
                fmt::format("  -   did not find some options: \"{}\"", want)};
      }
      chosen.push_back(*match);
    }
    if (chosen.size() > 1 && !sel.has_attr("multiple")) {
      return CommandError{Kind::unsupported,
                          fmt::format("Error: Element <select bid=\"{}\"> accepts a single option, "
                                      "got {}",
                                      sel.bid, chosen.size())};
    }
    std::vector<std::string> values;
    for (NodeId o : options) {
      const bool on = std::find(chosen.begin(), chosen.end(), o) != chosen.end();
      if (on) {
        p.set_attr(o, "selected", "");
        const auto value = p.attr(o, "value");
        values.push_back(value ? *value : p.text_content(o));
      } else {
        p.remove_attr(o, "selected");
      }
    }
    p.set_attr(id, "value", values.empty() ? "" : values.front());
    p.set_focus(id);
    std::string detail;
    for (const auto& v : values) detail += (detail.empty() ? "" : ",") + v;
    p.dispatch(PageEvent::select, id, detail);
    p.dispatch(PageEvent::input, id, detail);
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::Press& c) {
    NodeId id = 0;
    if (auto err = resolve(c.target, "press", false, id)) return err;
    page().set_focus(focus_target(id));
    deliver_key(id, c.key_comb);
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::Focus& c) {
    NodeId id = 0;
    if (auto err = resolve(c.target, "focus", false, id)) return err;
    page().set_focus(id);
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::Hover& c) {
    NodeId id = 0;
    if (auto err = resolve_pointer(c.target, "hover", id)) return err;
    hover(id);
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::DragAndDrop& c) {
    NodeId from = 0;
    NodeId to = 0;
    if (auto err = resolve_pointer(c.from, "drag_to", from)) return err;
    if (auto err = resolve_pointer(c.to, "drag_to", to)) return err;
    auto& p = page();
    if (from == to || from == p.root() || to == p.root()) return std::nullopt;
    if (p.is_ancestor(from, to)) {
      return CommandError{Kind::unsupported,
                          fmt::format("Error: cannot drop element bid=\"{}\" into its own "
                                      "descendant bid=\"{}\"",
                                      p.node(from).bid, p.node(to).bid)};
    }
    const NodeId parent = *p.node(to).parent;
    // Drop before the target, counted among the siblings without `from`.
    std::size_t pos = 0;
    for (NodeId k : p.node(parent).children) {
      if (k == to) break;
      if (k != from) ++pos;
    }
    p.move(from, parent, pos);
    p.dispatch(PageEvent::drop, to, p.node(from).bid);
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::UploadFile& c) {
    NodeId id = 0;
    if (auto err = resolve_pointer(c.target, "set_input_files", id)) return err;
    auto& p = page();
    const auto& n = p.node(id);
    if (n.tag != "input" || input_type(n) != "file") {
      return CommandError{Kind::unsupported,
                          fmt::format("Error: Element {} is not an <input type=\"file\"> element",
                                      resolved_tag(p, n))};
    }
    p.set_attr(id, "files", nlohmann::json(c.files).dump());
    p.dispatch(PageEvent::input, id, nlohmann::json(c.files).dump());
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::MouseMove& c) {
    hover(hit(c.x, c.y));
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::MouseButtonOp& c) {
    const NodeId id = hit(c.x, c.y);
    if (c.down) {
      b_.mouse_down_node_ = id;
      return std::nullopt;
    }
    const auto pressed = b_.mouse_down_node_;
    b_.mouse_down_node_.reset();
    if (pressed && *pressed == id && !page().node(id).has_attr("disabled")) {
      activate(id, c.button, 1);
    }
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::KeyboardOp& c) {
    using K = cmd::KeyboardOp::Kind;
    auto& p = page();
    const NodeId target = p.focused().value_or(p.root());
    switch (c.kind) {
      case K::down:
        b_.held_keys_.insert(c.text);
        break;
      case K::up:
        b_.held_keys_.erase(c.text);
        break;
      case K::press: {
        std::string comb;
        for (const auto& k : b_.held_keys_) comb += k + "+";
        deliver_key(target, comb + c.text);
        break;
      }
      case K::type:
        for (const auto& ch : split_code_points(c.text)) deliver_key(p.focused().value_or(p.root()), ch);
        break;
      case K::insert_text:
        if (is_editable(p.node(target))) {
          write_value(p, target, current_value(p, target) + c.text);
          p.dispatch(PageEvent::input, target, current_value(p, target));
        }
        break;
    }
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::Scroll& c) {
    auto& p = page();
    auto& vp = p.viewport();
    const Box& root = p.node(p.root()).box;
    vp.scroll_x = std::clamp(vp.scroll_x + c.dx, 0.0, std::max(0.0, root.width - vp.width));
    vp.scroll_y = std::clamp(vp.scroll_y + c.dy, 0.0, std::max(0.0, root.height - vp.height));
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::Goto& c) {
    return b_.navigate(b_.tabs_.active(), c.url, true);
  }

  std::optional<CommandError> operator()(const cmd::GoBack&) {
    auto& tab = b_.tabs_.active();
    if (tab.history_index == 0) return std::nullopt;
    --tab.history_index;
    return b_.navigate(tab, tab.history[tab.history_index], false);
  }

  std::optional<CommandError> operator()(const cmd::GoForward&) {
    auto& tab = b_.tabs_.active();
    if (tab.history_index + 1 >= tab.history.size()) return std::nullopt;
    ++tab.history_index;
    return b_.navigate(tab, tab.history[tab.history_index], false);
  }

  std::optional<CommandError> operator()(const cmd::NewTab&) {
    open_tab();
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::TabClose&) {
    auto& ts = b_.tabs_;
    if (ts.tabs.size() <= 1) {
      return CommandError{Kind::unsupported,
                          fmt::format("Error: cannot close tab {}, it is the last open tab",
                                      ts.active_index)};
    }
    ts.tabs.erase(ts.tabs.begin() + static_cast<std::ptrdiff_t>(ts.active_index));
    if (ts.active_index > 0) --ts.active_index;
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::TabFocus& c) {
    auto& ts = b_.tabs_;
    if (c.index < 0 || static_cast<std::size_t>(c.index) >= ts.tabs.size()) {
      return CommandError{Kind::not_found, fmt::format("Error: no tab at index {} ({} tabs open)",
                                                       c.index, ts.tabs.size())};
    }
    ts.active_index = static_cast<std::size_t>(c.index);
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::Wait& c) {
    b_.clock_ms_ += std::max(0.0, c.ms);
    return std::nullopt;
  }

  std::optional<CommandError> operator()(const cmd::AppendChat&) { return env_only("append_chat"); }
  std::optional<CommandError> operator()(const cmd::RequestTermination&) {
    return env_only("request_termination");
  }

 private:
  PageModel& page() { return b_.tabs_.active().page; }

  static std::optional<CommandError> env_only(std::string_view kind) {
    return CommandError{Kind::unsupported,
                        fmt::format("Error: '{}' is executed by the environment, not the page", kind)};
  }

  NodeId hit(double x, double y) {
    const auto& vp = page().viewport();
    return hit_test(page(), x + vp.scroll_x, y + vp.scroll_y).value_or(page().root());
  }

  std::optional<CommandError> resolve_pointer(const Target& target, std::string_view method,
                                              NodeId& out) {
    return resolve(target, method, true, out);
  }

  // Actionability gate for element targets; coordinate targets resolve to
  // whatever is under the point.
  std::optional<CommandError> resolve(const Target& target, std::string_view method, bool pointer,
                                      NodeId& out) {
    if (const auto* pt = std::get_if<PointTarget>(&target)) {
      out = hit(pt->x, pt->y);
      return std::nullopt;
    }
    const auto& bid = std::get<BidTarget>(target).bid;
    auto& p = page();
    const auto header = timeout_header(method, timeout_ms_, bid);
    const auto found = p.find_by_bid(bid);
    if (!found) return fail(Kind::not_found, header);
    const auto& n = p.node(*found);
    std::string log = header + "\n  -   locator resolved to " + resolved_tag(p, n) +
                      "\n  - attempting " + action_words(method) + " action" +
                      "\n  -   waiting for element to be visible, enabled and stable";
    if (visibility_ratio(n.box, p.viewport()) <= 0) {
      return fail(Kind::not_visible, log + "\n  -   element is not visible");
    }
    if (n.has_attr("disabled")) return fail(Kind::not_enabled, log + "\n  -   element is not enabled");
    if (pointer) {
      const auto [cx, cy] = n.box.center();
      std::optional<NodeId> blocker;
      for (NodeId id : p.document_order()) {
        const auto& o = p.node(id);
        if (!o.intercepts_pointer || id == n.id || !o.box.contains(cx, cy)) continue;
        if (p.is_ancestor(id, n.id) || p.is_ancestor(n.id, id)) continue;
        blocker = id;
      }
      if (blocker) {
        return fail(Kind::intercepted, log + "\n  -   element is visible, enabled and stable" +
                                           "\n  -   scrolling into view if needed" +
                                           "\n  -   done scrolling\n  -   " +
                                           start_tag(p.node(*blocker)) +
                                           "... intercepts pointer events");
      }
    }
    out = *found;
    return std::nullopt;
  }

  std::optional<CommandError> fail(Kind kind, std::string message) {
    b_.clock_ms_ += timeout_ms_;
    return CommandError{kind, std::move(message)};
  }

  std::optional<CommandError> fill(const Target& target, const std::string& value,
                                   std::string_view method) {
    NodeId id = 0;
    if (auto err = resolve(target, method, false, id)) return err;
    auto& p = page();
    const auto& n = p.node(id);
    if (!is_editable(n)) {
      return CommandError{Kind::unsupported,
                          fmt::format("Error: Element is not an <input>, <textarea> or "
                                      "[contenteditable] element\nCall log:\nwaiting for "
                                      "get_by_test_id(\"{}\")\n  -   locator resolved to {}",
                                      n.bid, resolved_tag(p, n))};
    }
    if (n.has_attr("readonly")) {
      return CommandError{Kind::not_enabled,
                          fmt::format("Error: Element bid=\"{}\" is read-only", n.bid)};
    }
    write_value(p, id, value);
    p.set_focus(id);
    p.dispatch(PageEvent::input, id, value);
    return std::nullopt;
  }

  std::optional<NodeId> focus_target(NodeId id) {
    auto& p = page();
    std::optional<NodeId> cur = id;
    while (cur) {
      if (is_focusable(p.node(*cur))) return cur;
      cur = p.node(*cur).parent;
    }
    return std::nullopt;
  }

  void hover(NodeId id) {
    auto& p = page();
    if (p.hovered() == id) return;
    p.set_hovered(id);
    p.dispatch(PageEvent::hover, id);
  }

  void open_tab() {
    auto& ts = b_.tabs_;
    Tab tab{b_.materialize("about:blank"), {"about:blank"}, 0};
    ts.tabs.push_back(std::move(tab));
    ts.active_index = ts.tabs.size() - 1;
  }

  void activate(NodeId id, MouseButton button, int count) {
    auto& p = page();
    p.set_hovered(id);
    p.set_focus(focus_target(id));
    if (button != MouseButton::left) return;
    const auto& n = p.node(id);
    if (n.tag == "input" && input_type(n) == "checkbox") {
      if (n.has_attr("checked")) {
        p.remove_attr(id, "checked");
      } else {
        p.set_attr(id, "checked", "");
      }
      p.dispatch(PageEvent::input, id, p.node(id).has_attr("checked") ? "on" : "off");
    } else if (n.tag == "input" && input_type(n) == "radio") {
      const auto name = p.attr(id, "name");
      if (name) {
        for (NodeId other : p.find_all([&](const Node& o) {
               return o.tag == "input" && input_type(o) == "radio" && o.attr("name") &&
                      *o.attr("name") == *name;
             })) {
          p.remove_attr(other, "checked");
        }
      }
      p.set_attr(id, "checked", "");
      p.dispatch(PageEvent::input, id, "on");
    }
    for (int i = 0; i < std::max(1, count); ++i) {
      if (!p.contains(id)) return;
      p.dispatch(PageEvent::click, id);
    }
    if (count >= 2 && p.contains(id)) p.dispatch(PageEvent::dblclick, id);
    if (!p.contains(id)) return;
    default_action(id);
  }

  void default_action(NodeId id) {
    auto& p = page();
    std::optional<NodeId> cur = id;
    while (cur) {
      const auto& n = p.node(*cur);
      if (n.tag == "a" && n.has_attr("href")) {
        const std::string href = *n.attr("href");
        if (href.empty() || href[0] == '#' || href.rfind("javascript:", 0) == 0) return;
        const auto target = n.attr("target");
        if (target && *target == "_blank") {
          open_tab();
          b_.navigate(b_.tabs_.active(), href, true);
        } else if (!p.has_pending_navigation()) {
          p.request_navigation(href);
        }
        return;
      }
      if (is_submit_control(n)) {
        const NodeId form = owning_form(p, *cur);
        if (form != p.root()) p.dispatch(PageEvent::submit, form);
        return;
      }
      cur = n.parent;
    }
  }

  void deliver_key(NodeId id, const std::string& comb) {
    auto& p = page();
    p.dispatch(PageEvent::key, id, comb);
    if (!p.contains(id)) return;
    const auto combo = parse_combo(comb);
    const auto& n = p.node(id);
    const bool editable = is_editable(n) && !n.has_attr("readonly") && !n.has_attr("disabled");
    const bool command_mod = combo.modifiers.count("Control") || combo.modifiers.count("Meta") ||
                             combo.modifiers.count("Alt");
    const std::string& key = combo.key;
    if (key == "Enter") {
      if (n.tag == "textarea" || n.has_attr("contenteditable")) {
        write_value(p, id, current_value(p, id) + "\n");
        p.dispatch(PageEvent::input, id, current_value(p, id));
      } else if (n.tag == "input" && editable) {
        const NodeId form = owning_form(p, id);
        if (form != p.root()) p.dispatch(PageEvent::submit, form);
      } else if (n.tag == "button" || n.tag == "a" ||
                 (n.tag == "input" && is_submit_control(n))) {
        activate(id, MouseButton::left, 1);
      }
      return;
    }
    if (key == "Backspace" || key == "Delete") {
      if (!editable) return;
      std::string v = current_value(p, id);
      if (command_mod) {
        v.clear();
      } else {
        pop_code_point(v);
      }
      write_value(p, id, v);
      p.dispatch(PageEvent::input, id, v);
      return;
    }
    if (key == "Tab") {
      const auto order = p.find_all([](const Node& o) { return is_focusable(o) && !is_hidden(o); });
      if (order.empty()) return;
      const auto focused = p.focused();
      auto it = focused ? std::find(order.begin(), order.end(), *focused) : order.end();
      const bool back = combo.modifiers.count("Shift") > 0;
      if (it == order.end()) {
        p.set_focus(back ? order.back() : order.front());
      } else if (back) {
        p.set_focus(it == order.begin() ? order.back() : *(it - 1));
      } else {
        p.set_focus(it + 1 == order.end() ? order.front() : *(it + 1));
      }
      return;
    }
    if ((key == "Space" || key == " ") && !editable) {
      if (n.tag == "button" || (n.tag == "input" && !is_editable(n))) {
        activate(id, MouseButton::left, 1);
      }
      return;
    }
    std::string ch = key == "Space" ? " " : key;
    if (code_point_count(ch) != 1 || command_mod || !editable) return;
    if (combo.modifiers.count("Shift") && ch.size() == 1) {
      ch[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(ch[0])));
    }
    write_value(p, id, current_value(p, id) + ch);
    p.dispatch(PageEvent::input, id, current_value(p, id));
  }

  SimBrowser& b_;
  int timeout_ms_;
};

SimBrowser::SimBrowser(std::uint64_t seed, Viewport viewport) : seed_(seed), viewport_(viewport) {
  tabs_.tabs.push_back(Tab{materialize("about:blank"), {"about:blank"}, 0});
}

void SimBrowser::register_page(std::string url, PageBuilder builder) {
  if (url == "about:blank") throw RegistrationError("about:blank cannot be registered");
  if (registry_.count(url)) throw RegistrationError("page already registered: " + url);
  registry_.emplace(std::move(url), std::move(builder));
}

PageModel SimBrowser::materialize(const std::string& url) const {
  PageModel page(url, "", viewport_);
  if (auto it = registry_.find(url); it != registry_.end()) it->second(page, seed_);
  if (fixtures_) {
    if (auto banner = fixtures_->get("banner:" + url)) {
      page.append(page.root(), "div", {{"class", "fixture-banner"}}, *banner);
    }
  }
  page.assign_bids();
  layout(page);
  return page;
}

std::optional<CommandError> SimBrowser::navigate(Tab& tab, const std::string& url, bool push) {
  if (url != "about:blank" && !registry_.count(url)) {
    return CommandError{Kind::navigation_failed,
                        fmt::format("Error: Page.goto: net::ERR_NAME_NOT_RESOLVED at {}", url)};
  }
  tab.page = materialize(url);
  if (push) {
    tab.history.resize(tab.history_index + 1);
    tab.history.push_back(url);
    tab.history_index = tab.history.size() - 1;
  }
  return std::nullopt;
}

std::optional<CommandError> SimBrowser::settle() {
  std::optional<CommandError> out;
  for (auto& tab : tabs_.tabs) {
    if (auto url = tab.page.take_pending_navigation()) {
      auto err = navigate(tab, *url, true);
      if (err && !out) out = std::move(err);
    }
    layout(tab.page);
  }
  return out;
}

std::optional<CommandError> SimBrowser::execute(const BackendCommand& command, int timeout_ms) {
  if (fault_hook_) fault_hook_(command);
  CommandRunner runner(*this, timeout_ms);
  auto result = runner.run(command);
  auto nav_error = settle();
  return result ? result : nav_error;
}

std::variant<NodeId, CommandError> SimBrowser::locate(std::string_view bid) const {
  if (auto id = active_page().find_by_bid(bid)) return *id;
  return CommandError{Kind::not_found,
                      fmt::format("Error: no element with bid \"{}\" on the active page", bid)};
}

}  // namespace wgym
