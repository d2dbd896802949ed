#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wgym {

using NodeId = std::uint32_t;

// Element tag used for bare text nodes.
inline constexpr std::string_view kTextTag = "#text";

struct Box {
  double left = 0;
  double top = 0;
  double width = 0;
  double height = 0;

  double right() const { return left + width; }
  double bottom() const { return top + height; }
  double area() const { return width * height; }
  bool contains(double x, double y) const {
    return width > 0 && height > 0 && x >= left && x < right() && y >= top && y < bottom();
  }
  std::pair<double, double> center() const { return {left + width / 2, top + height / 2}; }

  bool operator==(const Box&) const = default;
};

struct Viewport {
  double width = 1280;
  double height = 720;
  double scroll_x = 0;
  double scroll_y = 0;

  bool operator==(const Viewport&) const = default;
};

using Attributes = std::vector<std::pair<std::string, std::string>>;

struct Node {
  NodeId id = 0;
  std::string tag;
  Attributes attributes;  // source order
  std::string text;       // direct text, rendered before the children
  std::vector<NodeId> children;
  std::optional<NodeId> parent;
  std::string bid;  // injected identifier; empty until first assigned
  std::optional<Box> box_override;
  Box box;
  bool intercepts_pointer = false;
  bool attached = true;

  bool is_text() const { return tag == kTextTag; }
  const std::string* attr(std::string_view name) const;
  bool has_attr(std::string_view name) const { return attr(name) != nullptr; }

  bool operator==(const Node&) const = default;
};

enum class PageEvent { click, dblclick, input, select, submit, key, hover, drop };

struct EventContext {
  PageEvent event;
  NodeId target;   // node the event was dispatched to
  NodeId current;  // node whose handler is running (bubbling)
  std::string detail;  // key combination, option value, ...
};

class PageModel;
// In-page reaction standing in for page scripts. Handlers receive the page
// they run in and must not capture references to it.
using PageHandler = std::function<void(PageModel&, const EventContext&)>;

class PageModel {
 public:
  explicit PageModel(std::string url = "about:blank", std::string title = "",
                     Viewport viewport = {});

  NodeId root() const { return 0; }
  const std::string& url() const { return url_; }
  const std::string& title() const { return title_; }
  void set_title(std::string title) { title_ = std::move(title); }
  Viewport& viewport() { return viewport_; }
  const Viewport& viewport() const { return viewport_; }

  NodeId append(NodeId parent, std::string tag, Attributes attributes = {},
                std::string text = {});
  NodeId append_text(NodeId parent, std::string text);
  void remove(NodeId id);
  // Moves `id` under `new_parent` at child position `index` (clamped).
  void move(NodeId id, NodeId new_parent, std::size_t index);

  Node& node(NodeId id);
  const Node& node(NodeId id) const;
  bool contains(NodeId id) const { return id < nodes_.size() && nodes_[id].attached; }
  std::size_t node_count() const { return nodes_.size(); }

  std::optional<std::string> attr(NodeId id, std::string_view name) const;
  void set_attr(NodeId id, std::string_view name, std::string value);
  void remove_attr(NodeId id, std::string_view name);
  void set_text(NodeId id, std::string text) { node(id).text = std::move(text); }
  void set_box(NodeId id, Box box) { node(id).box_override = box; }
  void set_intercepts_pointer(NodeId id, bool on = true) { node(id).intercepts_pointer = on; }
  void set_bid(NodeId id, std::string bid);

  // Attached nodes in document (pre-order) order, starting at the root.
  std::vector<NodeId> document_order() const;
  std::optional<NodeId> find_by_bid(std::string_view bid) const;
  std::optional<NodeId> find_first(const std::function<bool(const Node&)>& pred) const;
  std::vector<NodeId> find_all(const std::function<bool(const Node&)>& pred) const;
  // Concatenated text of the node and its descendants, whitespace-collapsed.
  std::string text_content(NodeId id) const;
  bool is_ancestor(NodeId ancestor, NodeId id) const;

  // Gives every attached element that lacks a bid the next counter value, in
  // document order. Text nodes do not receive bids.
  void assign_bids();

  std::optional<NodeId> focused() const { return focused_; }
  void set_focus(std::optional<NodeId> id) { focused_ = id; }
  std::optional<NodeId> hovered() const { return hovered_; }
  void set_hovered(std::optional<NodeId> id) { hovered_ = id; }

  void on(NodeId id, PageEvent event, PageHandler handler);
  // Runs handlers on `target` then on each ancestor.
  void dispatch(PageEvent event, NodeId target, std::string detail = {});
  bool has_handler(NodeId id, PageEvent event) const;
  bool has_any_handler(NodeId id) const;

  // Page-script state (the equivalent of JS globals).
  std::map<std::string, std::string>& state() { return state_; }
  const std::map<std::string, std::string>& state() const { return state_; }

  // Handlers request navigation here; the browser honours it after the
  // command completes.
  void request_navigation(std::string url) { pending_navigation_ = std::move(url); }
  std::optional<std::string> take_pending_navigation();
  bool has_pending_navigation() const { return pending_navigation_.has_value(); }

  // Structural equality; handlers are code and are not compared.
  bool operator==(const PageModel& other) const;

 private:
  std::string url_;
  std::string title_;
  Viewport viewport_;
  std::vector<Node> nodes_;
  std::optional<NodeId> focused_;
  std::optional<NodeId> hovered_;
  std::map<std::pair<NodeId, PageEvent>, std::vector<PageHandler>> handlers_;
  std::map<std::string, std::string> state_;
  std::optional<std::string> pending_navigation_;
  std::uint64_t next_bid_ = 1;
  std::set<std::string> used_bids_;
};

// The node's attributes with the injected bid attribute placed before the
// first attribute whose name sorts after "bid". Other attributes keep their
// source order.
Attributes attributes_with_bid(const Node& node);
std::string escape_html_attr(std::string_view value);
std::string escape_html_text(std::string_view value);
// `<tag a="1" bid="7">` using attributes_with_bid.
std::string start_tag(const Node& node);

bool is_void_element(std::string_view tag);
bool is_inline_element(std::string_view tag);
bool is_hidden(const Node& node);
// Same rule over a bare tag and attribute list.
bool is_hidden(std::string_view tag, const Attributes& attributes);
// Editable as a text field: text-like inputs, textarea, [contenteditable].
bool is_editable(const Node& node);
bool is_focusable(const Node& node);

}  // namespace wgym
