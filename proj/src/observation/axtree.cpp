#include "wgym/observation/axtree.hpp"

#include <map>
#include <stdexcept>

namespace wgym {

std::string_view to_string(AXProperty p) {
  switch (p) {
    case AXProperty::clickable:
      return "clickable";
    case AXProperty::visible:
      return "visible";
    case AXProperty::focused:
      return "focused";
    case AXProperty::disabled:
      return "disabled";
  }
  return "";
}

namespace {

std::string collapse(std::string_view text) {
  std::string out;
  for (char c : text) {
    const bool space = c == ' ' || c == '\n' || c == '\t' || c == '\r';
    if (space) {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += c;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

std::string attr_or(const DomNode& n, std::string_view name, std::string fallback = {}) {
  if (const auto* v = n.attr(name)) return *v;
  return fallback;
}

bool is_leaf_role(std::string_view role) {
  return role == "button" || role == "link" || role == "textbox" || role == "checkbox" ||
         role == "radio" || role == "image" || role == "heading" || role == "option";
}

class Builder {
 public:
  Builder(const DomNode& dom, const PropsMap& props, const std::optional<std::string>& focused,
          double threshold)
      : props_(props), focused_(focused), threshold_(threshold) {
    index_labels(dom);
  }

  AXNode build_root(const DomNode& dom) {
    AXNode root;
    root.role = "RootWebArea";
    if (!dom.bid.empty()) root.bid = dom.bid;
    apply_props(root, dom);
    add_text(root.children, dom.text, root);
    for (const auto& c : dom.children) build(c, root.children, root, "");
    return root;
  }

 private:
  void index_labels(const DomNode& n) {
    if (n.tag == "label") {
      if (const auto* f = n.attr("for")) labels_.emplace(*f, collapse(dom_text_content(n)));
    }
    for (const auto& c : n.children) index_labels(c);
  }

  void apply_props(AXNode& ax, const DomNode& n) {
    auto it = props_.find(n.bid);
    if (it != props_.end()) {
      const auto& p = it->second;
      if (p.clickable) ax.properties.insert(AXProperty::clickable);
      if (p.visibility > threshold_) ax.properties.insert(AXProperty::visible);
      ax.bbox = p.bbox;
      ax.set_of_marks = p.set_of_marks;
    }
    if (focused_ && !n.bid.empty() && *focused_ == n.bid) ax.properties.insert(AXProperty::focused);
    if (n.attr("disabled")) ax.properties.insert(AXProperty::disabled);
  }

  // Static text inherits the visibility of the element that holds it.
  void add_text(std::vector<AXNode>& out, std::string_view raw, const AXNode& holder) {
    std::string text = collapse(raw);
    if (text.empty()) return;
    AXNode t;
    t.role = "StaticText";
    t.static_text = std::move(text);
    if (holder.has(AXProperty::visible)) t.properties.insert(AXProperty::visible);
    out.push_back(std::move(t));
  }

  std::string label_for(const DomNode& n, const std::string& enclosing_label) {
    if (const auto* id = n.attr("id")) {
      auto it = labels_.find(*id);
      if (it != labels_.end() && !it->second.empty()) return it->second;
    }
    return enclosing_label;
  }

  std::string name_of(const DomNode& n, const std::string& role,
                      const std::string& enclosing_label) {
    if (const auto* aria = n.attr("aria-label"); aria && !aria->empty()) return collapse(*aria);
    if (role == "image") return attr_or(n, "alt", attr_or(n, "title"));
    if (n.tag == "input") {
      const auto type = attr_or(n, "type", "text");
      if (type == "submit" || type == "reset" || type == "button") {
        const std::string fallback = type == "submit" ? "Submit" : type == "reset" ? "Reset" : "";
        return attr_or(n, "value", fallback);
      }
    }
    if (role == "textbox" || role == "checkbox" || role == "radio" || role == "combobox") {
      auto label = label_for(n, enclosing_label);
      if (!label.empty()) return label;
      if (role == "textbox") {
        if (const auto* ph = n.attr("placeholder"); ph && !ph->empty()) return *ph;
      }
      return attr_or(n, "title");
    }
    if (role == "button" || role == "link" || role == "heading" || role == "option" ||
        role == "tab" || role == "menuitem") {
      auto text = collapse(dom_text_content(n));
      if (!text.empty()) return text;
    }
    return attr_or(n, "title");
  }

  void add_states(AXNode& ax, const DomNode& n) {
    if (ax.role == "textbox") {
      std::string value = n.attr("contenteditable") ? collapse(dom_text_content(n))
                                                      : attr_or(n, "value");
      if (!value.empty()) ax.states.emplace_back("value", value);
    } else if (ax.role == "checkbox" || ax.role == "radio") {
      ax.states.emplace_back("checked", n.attr("checked") ? "true" : "false");
    } else if (ax.role == "option") {
      if (n.attr("selected")) ax.states.emplace_back("selected", "true");
    } else if (ax.role == "combobox" && n.tag == "select") {
      const DomNode* first = nullptr;
      const DomNode* chosen = nullptr;
      find_options(n, first, chosen);
      const DomNode* shown = chosen ? chosen : first;
      if (shown) ax.states.emplace_back("value", collapse(dom_text_content(*shown)));
    }
  }

  static void find_options(const DomNode& n, const DomNode*& first, const DomNode*& chosen) {
    for (const auto& c : n.children) {
      if (c.tag == "option") {
        if (!first) first = &c;
        if (!chosen && c.attr("selected")) chosen = &c;
      }
      find_options(c, first, chosen);
    }
  }

  void build(const DomNode& n, std::vector<AXNode>& out, const AXNode& holder,
             const std::string& enclosing_label) {
    if (n.is_text()) {
      add_text(out, n.text, holder);
      return;
    }
    if (is_hidden(n.tag, n.attributes) || attr_or(n, "aria-hidden") == "true") return;
    const std::string label =
        n.tag == "label" ? collapse(dom_text_content(n)) : enclosing_label;
    std::string role = ax_role(n);
    std::string name = name_of(n, role, label);
    if (role == "Section" && !name.empty()) role = "form";
    if (role == "generic" && name.empty()) {
      AXNode shadow;
      apply_props(shadow, n);
      add_text(out, n.text, shadow);
      for (const auto& c : n.children) build(c, out, shadow, label);
      return;
    }
    AXNode ax;
    if (!n.bid.empty()) ax.bid = n.bid;
    ax.role = std::move(role);
    ax.name = std::move(name);
    apply_props(ax, n);
    add_states(ax, n);
    if (!is_leaf_role(ax.role)) {
      add_text(ax.children, n.text, ax);
      for (const auto& c : n.children) build(c, ax.children, ax, label);
    }
    out.push_back(std::move(ax));
  }

  const PropsMap& props_;
  const std::optional<std::string>& focused_;
  double threshold_;
  std::map<std::string, std::string> labels_;
};

}  // namespace

std::string ax_role(const DomNode& n) {
  if (const auto* role = n.attr("role"); role && !role->empty()) return *role;
  const std::string& t = n.tag;
  if (t == "button") return "button";
  if (t == "a") return n.attr("href") ? "link" : "generic";
  if (t == "input") {
    const auto type = attr_or(n, "type", "text");
    if (type == "checkbox") return "checkbox";
    if (type == "radio") return "radio";
    if (type == "submit" || type == "button" || type == "reset" || type == "file" ||
        type == "image") {
      return "button";
    }
    return "textbox";
  }
  if (t == "textarea") return "textbox";
  if (n.attr("contenteditable")) return "textbox";
  if (t == "select") return "combobox";
  if (t == "option") return "option";
  if (t == "img") return "image";
  if (t == "form") return "Section";
  if (t == "nav") return "navigation";
  if (t == "main") return "main";
  if (t.size() == 2 && t[0] == 'h' && t[1] >= '1' && t[1] <= '6') return "heading";
  if (t == "li") return "listitem";
  if (t == "ul" || t == "ol") return "list";
  if (t == "table") return "table";
  return "generic";
}

AXNode derive_axtree(const DomNode& dom, const PropsMap& props,
                     const std::optional<std::string>& focused_bid, double visible_threshold) {
  Builder builder(dom, props, focused_bid, visible_threshold);
  return builder.build_root(dom);
}

void to_json(nlohmann::json& j, const AXNode& node) {
  j = nlohmann::json{{"role", node.role}};
  if (node.bid) j["bid"] = *node.bid;
  if (!node.name.empty()) j["name"] = node.name;
  if (!node.properties.empty()) {
    auto props = nlohmann::json::array();
    for (auto p : node.properties) props.push_back(to_string(p));
    j["properties"] = props;
  }
  if (!node.states.empty()) {
    auto states = nlohmann::json::array();
    for (const auto& [k, v] : node.states) states.push_back({k, v});
    j["states"] = states;
  }
  if (node.static_text) j["static_text"] = *node.static_text;
  if (node.bbox) j["bbox"] = {node.bbox->left, node.bbox->top, node.bbox->width, node.bbox->height};
  if (node.set_of_marks) j["set_of_marks"] = true;
  if (!node.children.empty()) j["children"] = node.children;
}

void from_json(const nlohmann::json& j, AXNode& node) {
  node = AXNode{};
  node.role = j.at("role").get<std::string>();
  if (j.contains("bid")) node.bid = j.at("bid").get<std::string>();
  node.name = j.value("name", std::string());
  if (j.contains("properties")) {
    for (const auto& p : j.at("properties")) {
      const auto s = p.get<std::string>();
      bool found = false;
      for (auto cand : {AXProperty::clickable, AXProperty::visible, AXProperty::focused,
                        AXProperty::disabled}) {
        if (to_string(cand) == s) {
          node.properties.insert(cand);
          found = true;
        }
      }
      if (!found) throw std::invalid_argument("unknown AX property '" + s + "'");
    }
  }
  if (j.contains("states")) {
    for (const auto& kv : j.at("states")) {
      node.states.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
    }
  }
  if (j.contains("static_text")) node.static_text = j.at("static_text").get<std::string>();
  if (j.contains("bbox")) {
    const auto& b = j.at("bbox");
    node.bbox = Box{b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                    b.at(3).get<double>()};
  }
  node.set_of_marks = j.value("set_of_marks", false);
  node.children = j.value("children", std::vector<AXNode>{});
}

}  // namespace wgym
