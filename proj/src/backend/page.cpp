#include "wgym/backend/page.hpp"

#include <algorithm>
#include <stdexcept>

namespace wgym {

const std::string* Node::attr(std::string_view name) const {
  for (const auto& [k, v] : attributes) {
    if (k == name) return &v;
  }
  return nullptr;
}

PageModel::PageModel(std::string url, std::string title, Viewport viewport)
    : url_(std::move(url)), title_(std::move(title)), viewport_(viewport) {
  Node root;
  root.id = 0;
  root.tag = "body";
  nodes_.push_back(std::move(root));
}

NodeId PageModel::append(NodeId parent, std::string tag, Attributes attributes, std::string text) {
  if (!contains(parent)) throw std::out_of_range("append: unknown parent node");
  if (tag.empty()) throw std::invalid_argument("append: empty tag");
  Node n;
  n.id = static_cast<NodeId>(nodes_.size());
  n.tag = std::move(tag);
  n.attributes = std::move(attributes);
  n.text = std::move(text);
  n.parent = parent;
  nodes_.push_back(std::move(n));
  nodes_[parent].children.push_back(nodes_.back().id);
  return nodes_.back().id;
}

NodeId PageModel::append_text(NodeId parent, std::string text) {
  return append(parent, std::string(kTextTag), {}, std::move(text));
}

void PageModel::remove(NodeId id) {
  if (id == root()) throw std::invalid_argument("remove: cannot remove the root");
  if (!contains(id)) return;
  auto& siblings = nodes_[*nodes_[id].parent].children;
  siblings.erase(std::remove(siblings.begin(), siblings.end(), id), siblings.end());
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    nodes_[cur].attached = false;
    if (focused_ == cur) focused_.reset();
    if (hovered_ == cur) hovered_.reset();
    for (NodeId c : nodes_[cur].children) stack.push_back(c);
  }
  nodes_[id].parent.reset();
}

void PageModel::move(NodeId id, NodeId new_parent, std::size_t index) {
  if (id == root() || !contains(id) || !contains(new_parent)) {
    throw std::invalid_argument("move: invalid nodes");
  }
  if (id == new_parent || is_ancestor(id, new_parent)) {
    throw std::invalid_argument("move: cannot move a node into its own subtree");
  }
  auto& old_siblings = nodes_[*nodes_[id].parent].children;
  old_siblings.erase(std::remove(old_siblings.begin(), old_siblings.end(), id),
                     old_siblings.end());
  auto& siblings = nodes_[new_parent].children;
  index = std::min(index, siblings.size());
  siblings.insert(siblings.begin() + static_cast<std::ptrdiff_t>(index), id);
  nodes_[id].parent = new_parent;
}

Node& PageModel::node(NodeId id) {
  if (id >= nodes_.size()) throw std::out_of_range("unknown node id");
  return nodes_[id];
}

const Node& PageModel::node(NodeId id) const {
  if (id >= nodes_.size()) throw std::out_of_range("unknown node id");
  return nodes_[id];
}

std::optional<std::string> PageModel::attr(NodeId id, std::string_view name) const {
  if (const auto* v = node(id).attr(name)) return *v;
  return std::nullopt;
}

void PageModel::set_attr(NodeId id, std::string_view name, std::string value) {
  auto& attrs = node(id).attributes;
  for (auto& [k, v] : attrs) {
    if (k == name) {
      v = std::move(value);
      return;
    }
  }
  attrs.emplace_back(std::string(name), std::move(value));
}

void PageModel::remove_attr(NodeId id, std::string_view name) {
  auto& attrs = node(id).attributes;
  attrs.erase(std::remove_if(attrs.begin(), attrs.end(),
                             [&](const auto& kv) { return kv.first == name; }),
              attrs.end());
}

void PageModel::set_bid(NodeId id, std::string bid) {
  auto& n = node(id);
  if (n.is_text()) throw std::invalid_argument("text nodes do not carry bids");
  if (bid == n.bid) return;
  if (used_bids_.count(bid)) throw std::invalid_argument("bid '" + bid + "' already in use");
  if (!n.bid.empty()) used_bids_.erase(n.bid);
  used_bids_.insert(bid);
  n.bid = std::move(bid);
}

std::vector<NodeId> PageModel::document_order() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size());
  std::vector<NodeId> stack{root()};
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    const auto& kids = nodes_[cur].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::optional<NodeId> PageModel::find_by_bid(std::string_view bid) const {
  if (bid.empty()) return std::nullopt;
  for (const auto& n : nodes_) {
    if (n.attached && n.bid == bid) return n.id;
  }
  return std::nullopt;
}

std::optional<NodeId> PageModel::find_first(const std::function<bool(const Node&)>& pred) const {
  for (NodeId id : document_order()) {
    if (pred(nodes_[id])) return id;
  }
  return std::nullopt;
}

std::vector<NodeId> PageModel::find_all(const std::function<bool(const Node&)>& pred) const {
  std::vector<NodeId> out;
  for (NodeId id : document_order()) {
    if (pred(nodes_[id])) out.push_back(id);
  }
  return out;
}

namespace {

void append_collapsed(std::string& out, std::string_view text) {
  for (char c : text) {
    const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
    if (space) {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += c;
    }
  }
}

}  // namespace

std::string PageModel::text_content(NodeId id) const {
  std::string out;
  std::vector<NodeId> stack{id};
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    const auto& n = nodes_[cur];
    if (!n.text.empty()) {
      if (!out.empty() && out.back() != ' ') out += ' ';
      append_collapsed(out, n.text);
    }
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

bool PageModel::is_ancestor(NodeId ancestor, NodeId id) const {
  auto cur = nodes_.at(id).parent;
  while (cur) {
    if (*cur == ancestor) return true;
    cur = nodes_[*cur].parent;
  }
  return false;
}

void PageModel::assign_bids() {
  for (NodeId id : document_order()) {
    auto& n = nodes_[id];
    if (n.is_text() || !n.bid.empty()) continue;
    std::string candidate;
    do {
      candidate = std::to_string(next_bid_++);
    } while (used_bids_.count(candidate));
    used_bids_.insert(candidate);
    n.bid = std::move(candidate);
  }
}

void PageModel::on(NodeId id, PageEvent event, PageHandler handler) {
  if (!contains(id)) throw std::out_of_range("on: unknown node");
  handlers_[{id, event}].push_back(std::move(handler));
}

void PageModel::dispatch(PageEvent event, NodeId target, std::string detail) {
  std::optional<NodeId> cur = target;
  while (cur) {
    auto it = handlers_.find({*cur, event});
    if (it != handlers_.end()) {
      const auto handlers = it->second;  // handlers may register new handlers
      for (const auto& h : handlers) {
        h(*this, EventContext{event, target, *cur, detail});
      }
    }
    if (!contains(*cur)) break;
    cur = nodes_[*cur].parent;
  }
}

bool PageModel::has_handler(NodeId id, PageEvent event) const {
  return handlers_.count({id, event}) > 0;
}

bool PageModel::has_any_handler(NodeId id) const {
  auto it = handlers_.lower_bound({id, PageEvent::click});
  return it != handlers_.end() && it->first.first == id;
}

std::optional<std::string> PageModel::take_pending_navigation() {
  auto out = std::move(pending_navigation_);
  pending_navigation_.reset();
  return out;
}

bool PageModel::operator==(const PageModel& other) const {
  return url_ == other.url_ && title_ == other.title_ && viewport_ == other.viewport_ &&
         nodes_ == other.nodes_ && focused_ == other.focused_ && hovered_ == other.hovered_ &&
         state_ == other.state_ && pending_navigation_ == other.pending_navigation_ &&
         next_bid_ == other.next_bid_ && used_bids_ == other.used_bids_;
}

Attributes attributes_with_bid(const Node& node) {
  Attributes out;
  out.reserve(node.attributes.size() + 1);
  bool placed = node.bid.empty();
  for (const auto& kv : node.attributes) {
    if (kv.first == "bid") continue;
    if (!placed && kv.first > "bid") {
      out.emplace_back("bid", node.bid);
      placed = true;
    }
    out.push_back(kv);
  }
  if (!placed) out.emplace_back("bid", node.bid);
  return out;
}

std::string escape_html_attr(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string escape_html_text(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string start_tag(const Node& node) {
  std::string out = "<" + node.tag;
  for (const auto& [k, v] : attributes_with_bid(node)) {
    out += ' ';
    out += k;
    out += "=\"";
    out += escape_html_attr(v);
    out += '"';
  }
  out += '>';
  return out;
}

bool is_void_element(std::string_view tag) {
  return tag == "input" || tag == "img" || tag == "br" || tag == "hr" || tag == "meta" ||
         tag == "link";
}

bool is_inline_element(std::string_view tag) {
  static const std::set<std::string_view> kInline = {
      "a",      "span",   "button", "input", "img",   "label", "select", "textarea",
      "b",      "i",      "em",     "strong", "code", "small", "svg",    "option",
      kTextTag};
  return kInline.count(tag) > 0;
}

bool is_hidden(const Node& node) { return is_hidden(node.tag, node.attributes); }

bool is_hidden(std::string_view tag, const Attributes& attributes) {
  for (const auto& [k, v] : attributes) {
    if (k == "hidden") return true;
    if (k == "style") {
      std::string compact;
      for (char c : v) {
        if (c != ' ') compact += c;
      }
      if (compact.find("display:none") != std::string::npos) return true;
    }
    if (k == "type" && tag == "input" && v == "hidden") return true;
  }
  return false;
}

bool is_editable(const Node& node) {
  if (node.tag == "textarea") return true;
  if (node.has_attr("contenteditable")) return true;
  if (node.tag != "input") return false;
  const auto* type = node.attr("type");
  if (!type) return true;
  static const std::set<std::string_view> kTextLike = {"text",   "email", "password", "number",
                                                       "search", "tel",   "url",      "date"};
  return kTextLike.count(*type) > 0;
}

bool is_focusable(const Node& node) {
  if (node.tag == "input" || node.tag == "textarea" || node.tag == "select" ||
      node.tag == "button" || node.has_attr("tabindex") || node.has_attr("contenteditable")) {
    return true;
  }
  return node.tag == "a" && node.has_attr("href");
}

}  // namespace wgym
