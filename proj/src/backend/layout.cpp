#include "wgym/backend/layout.hpp"

#include <algorithm>
#include <string>

namespace wgym {

double block_height(std::string_view tag) {
  if (tag == "h1") return 40;
  if (tag == "h2") return 36;
  if (tag == "h3") return 32;
  return kLineHeight;
}

namespace {

struct Size {
  double width;
  double height;
};

class FlowLayout {
 public:
  explicit FlowLayout(PageModel& page) : page_(page) {}

  void run() {
    auto& root = page_.node(page_.root());
    const auto vp = page_.viewport();
    const double content = layout_children(root.id, 0, 0, vp.width, /*own_text=*/true);
    page_.node(page_.root()).box = Box{0, 0, vp.width, std::max(vp.height, content)};
  }

 private:
  static double text_width(std::string_view text) {
    return kCharWidth * static_cast<double>(text.size());
  }

  void collapse(NodeId id, double x, double y) {
    auto& n = page_.node(id);
    n.box = Box{x, y, 0, 0};
    for (NodeId c : n.children) collapse(c, x, y);
  }

  Size intrinsic_inline(NodeId id) {
    const auto& n = page_.node(id);
    if (n.is_text()) return {text_width(n.text), kLineHeight};
    if (n.tag == "input") {
      const auto* type = n.attr("type");
      const std::string t = type ? *type : "text";
      if (t == "checkbox" || t == "radio") return {20, 20};
      if (t == "submit" || t == "button" || t == "reset") {
        const auto* value = n.attr("value");
        return {text_width(value ? *value : "Submit") + 16, kLineHeight};
      }
      if (t == "file") return {220, kLineHeight};
      return {200, kLineHeight};
    }
    if (n.tag == "img") {
      auto dim = [&](std::string_view name, double fallback) {
        if (const auto* v = n.attr(name)) {
          try {
            return std::stod(*v);
          } catch (...) {
          }
        }
        return fallback;
      };
      return {dim("width", 100), dim("height", 100)};
    }
    if (n.tag == "select") return {160, kLineHeight};
    if (n.tag == "textarea") return {300, 2 * kLineHeight};
    if (n.tag == "option") return {0, 0};
    const std::string content = page_.text_content(id);
    if (n.tag == "button") return {std::max(30.0, text_width(content) + 16), kLineHeight};
    return {text_width(content), content.empty() ? 0 : kLineHeight};
  }

  // Places an inline node at (x, y). Inline descendants get boxes inside it,
  // flowing left to right.
  void place_inline(NodeId id, double x, double y, Size size) {
    auto& n = page_.node(id);
    n.box = Box{x, y, size.width, size.height};
    const bool opaque = n.tag == "select" || n.tag == "textarea" || n.tag == "input";
    double cx = x + (n.tag == "button" ? 8 : 0);
    if (!n.text.empty()) cx += text_width(n.text);
    const std::vector<NodeId> kids = n.children;
    for (NodeId c : kids) {
      const auto& child = page_.node(c);
      if (is_hidden(child) || opaque) {
        collapse(c, x, y);
        continue;
      }
      if (child.box_override) {
        place_override(c);
        continue;
      }
      const Size s = intrinsic_inline(c);
      place_inline(c, cx, y, s);
      cx += s.width;
    }
  }

  void place_override(NodeId id) {
    auto& n = page_.node(id);
    const Box b = *n.box_override;
    n.box = b;
    if (is_inline_element(n.tag)) {
      const std::vector<NodeId> kids = n.children;
      double cx = b.left;
      for (NodeId c : kids) {
        const Size s = intrinsic_inline(c);
        place_inline(c, cx, b.top, s);
        cx += s.width;
      }
    } else {
      layout_children(id, b.left, b.top, b.width, true);
    }
  }

  // Lays out the children of a block container whose content box starts at
  // (x, y) with the given width. Returns the content height.
  double layout_children(NodeId id, double x, double y, double width, bool own_text) {
    double cursor_y = y;
    double cursor_x = x;
    double line_h = 0;
    auto flush = [&] {
      cursor_y += line_h;
      line_h = 0;
      cursor_x = x;
    };
    const auto& self = page_.node(id);
    if (own_text && !self.text.empty()) {
      cursor_x += text_width(self.text);
      line_h = kLineHeight;
    }
    const std::vector<NodeId> kids = self.children;
    for (NodeId c : kids) {
      const auto& child = page_.node(c);
      if (is_hidden(child)) {
        collapse(c, cursor_x, cursor_y);
        continue;
      }
      if (child.box_override) {
        place_override(c);
        continue;
      }
      if (is_inline_element(child.tag)) {
        const Size s = intrinsic_inline(c);
        if (cursor_x > x && cursor_x + s.width > x + width) flush();
        place_inline(c, cursor_x, cursor_y, s);
        cursor_x += s.width;
        line_h = std::max(line_h, s.height);
      } else {
        flush();
        const double h = layout_block(c, x, cursor_y, width);
        cursor_y += h;
      }
    }
    flush();
    return cursor_y - y;
  }

  double layout_block(NodeId id, double x, double y, double width) {
    const double content = layout_children(id, x, y, width, true);
    const std::string tag = page_.node(id).tag;
    const double h = content > 0 ? content : block_height(tag);
    page_.node(id).box = Box{x, y, width, h};
    return h;
  }

  PageModel& page_;
};

}  // namespace

void layout(PageModel& page) { FlowLayout(page).run(); }

std::optional<NodeId> hit_test(const PageModel& page, double x, double y) {
  std::optional<NodeId> best;
  std::optional<NodeId> interceptor;
  for (NodeId id : page.document_order()) {
    const auto& n = page.node(id);
    if (n.is_text() || !n.box.contains(x, y)) continue;
    if (n.intercepts_pointer) interceptor = id;
    // Later nodes in document order paint above earlier ones.
    best = id;
  }
  if (interceptor) {
    // Prefer the deepest node inside the interceptor, if any.
    if (best && (*best == *interceptor || page.is_ancestor(*interceptor, *best))) return best;
    return interceptor;
  }
  return best;
}

Box viewport_rect(const Viewport& viewport) {
  return Box{viewport.scroll_x, viewport.scroll_y, viewport.width, viewport.height};
}

double visibility_ratio(const Box& box, const Viewport& viewport) {
  if (box.area() <= 0) return 0.0;
  const Box vp = viewport_rect(viewport);
  const double w = std::min(box.right(), vp.right()) - std::max(box.left, vp.left);
  const double h = std::min(box.bottom(), vp.bottom()) - std::max(box.top, vp.top);
  if (w <= 0 || h <= 0) return 0.0;
  return std::clamp(w * h / box.area(), 0.0, 1.0);
}

}  // namespace wgym
