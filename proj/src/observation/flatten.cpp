#include "wgym/observation/flatten.hpp"

#include <fmt/format.h>

namespace wgym {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \n\t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \n\t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string number(double v) { return fmt::format("{:g}", v); }

class AXWriter {
 public:
  explicit AXWriter(const AXFlattenOptions& o) : o_(o) {}

  void node(const AXNode& n, std::size_t depth) {
    if (keep(n)) {
      line(n, depth);
      for (const auto& c : n.children) node(c, depth + 1);
    } else {
      for (const auto& c : n.children) node(c, depth);
    }
  }

  std::string take() {
    if (!out_.empty() && out_.back() == '\n') out_.pop_back();
    return std::move(out_);
  }

 private:
  bool keep(const AXNode& n) const {
    if (o_.filter_with_bid_only && !n.bid) return false;
    if (o_.filter_visible_only && !n.has(AXProperty::visible)) return false;
    if (o_.filter_som_only && !n.set_of_marks) return false;
    return true;
  }

  void line(const AXNode& n, std::size_t depth) {
    out_.append(depth * 2, ' ');
    if (n.static_text) {
      out_ += "StaticText '" + *n.static_text + "'\n";
      return;
    }
    if (n.bid) out_ += "[" + *n.bid + "] ";
    out_ += n.role + " '" + n.name + "'";
    for (const auto& [k, v] : n.states) out_ += ", " + k + "='" + v + "'";
    for (auto p : n.properties) {
      if (p == AXProperty::clickable && !o_.show_clickable) continue;
      if (p == AXProperty::visible && !o_.show_visible) continue;
      out_ += ", ";
      out_ += to_string(p);
    }
    if (o_.show_coords && n.bbox) {
      out_ += ", bbox=(" + number(n.bbox->left) + "," + number(n.bbox->top) + "," +
              number(n.bbox->width) + "," + number(n.bbox->height) + ")";
    }
    out_ += '\n';
  }

  const AXFlattenOptions& o_;
  std::string out_;
};

class HtmlWriter {
 public:
  explicit HtmlWriter(const HtmlFlattenOptions& o) : o_(o) {}

  void node(const DomNode& n, std::size_t depth) {
    if (n.is_text()) {
      text(n.text, depth);
      return;
    }
    if (!keep(n)) {
      text(n.text, depth);
      for (const auto& c : n.children) node(c, depth);
      return;
    }
    std::string open = "<" + n.tag;
    for (const auto& [k, v] : n.attributes) open += " " + k + "=\"" + escape_html_attr(v) + "\"";
    const std::string indent(depth * 2, ' ');
    if (is_void_element(n.tag)) {
      out_ += indent + open + " />\n";
      return;
    }
    open += ">";
    const std::string close = "</" + n.tag + ">";
    const bool has_content = !trim(n.text).empty() || !n.children.empty();
    if (!has_content) {
      out_ += indent + open + close + "\n";
    } else if (depth >= o_.max_depth) {
      out_ += indent + open + "..." + close + "\n";
    } else {
      out_ += indent + open + "\n";
      text(n.text, depth + 1);
      for (const auto& c : n.children) node(c, depth + 1);
      out_ += indent + close + "\n";
    }
  }

  std::string take() {
    if (!out_.empty() && out_.back() == '\n') out_.pop_back();
    return std::move(out_);
  }

 private:
  bool keep(const DomNode& n) const {
    if (o_.filter_with_bid_only && n.bid.empty()) return false;
    if (o_.filter_visible_only && o_.props) {
      auto it = o_.props->find(n.bid);
      if (it == o_.props->end() || it->second.visibility <= kVisibleThreshold) return false;
    }
    return true;
  }

  void text(std::string_view raw, std::size_t depth) {
    const auto t = trim(raw);
    if (t.empty()) return;
    out_.append(depth * 2, ' ');
    out_ += t + "\n";
  }

  const HtmlFlattenOptions& o_;
  std::string out_;
};

}  // namespace

std::string flatten_axtree(const AXNode& root, const AXFlattenOptions& options) {
  AXWriter w(options);
  for (const auto& c : root.children) w.node(c, 0);
  return w.take();
}

std::string flatten_html(const DomNode& dom, const HtmlFlattenOptions& options) {
  HtmlWriter w(options);
  if (dom.tag == "body") {
    if (!trim(dom.text).empty()) w.node(DomNode{"", std::string(kTextTag), {}, dom.text, {}}, 0);
    for (const auto& c : dom.children) w.node(c, 0);
  } else {
    w.node(dom, 0);
  }
  return w.take();
}

}  // namespace wgym
