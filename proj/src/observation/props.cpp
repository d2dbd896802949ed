#include "wgym/observation/props.hpp"

#include <set>

#include "wgym/backend/layout.hpp"

namespace wgym {

bool is_clickable(const PageModel& page, NodeId id) {
  const auto& n = page.node(id);
  if (n.is_text() || n.box.area() <= 0 || is_hidden(n)) return false;
  static const std::set<std::string_view> kInteractiveRoles = {
      "button", "link", "checkbox", "radio", "tab", "menuitem", "option", "switch", "textbox"};
  if (const auto* role = n.attr("role"); role && kInteractiveRoles.count(*role)) return true;
  if (n.tag == "button" || n.tag == "select" || n.tag == "textarea" || n.tag == "option" ||
      n.tag == "summary") {
    return true;
  }
  if (n.tag == "input") return true;
  if (n.tag == "a" && n.has_attr("href")) return true;
  if (n.has_attr("onclick") || n.has_attr("contenteditable")) return true;
  return page.has_handler(id, PageEvent::click) || page.has_handler(id, PageEvent::dblclick);
}

PropsMap compute_extra_props(const PageModel& page, const Viewport& viewport) {
  PropsMap out;
  for (NodeId id : page.document_order()) {
    const auto& n = page.node(id);
    if (n.is_text() || n.bid.empty()) continue;
    ExtraProps p;
    p.bbox = n.box;
    p.visibility = visibility_ratio(n.box, viewport);
    p.clickable = is_clickable(page, id);
    p.set_of_marks = p.visibility > 0 && (p.clickable || is_focusable(n));
    out.emplace(n.bid, p);
  }
  return out;
}

void to_json(nlohmann::json& j, const ExtraProps& props) {
  j = nlohmann::json{
      {"bbox", {props.bbox.left, props.bbox.top, props.bbox.width, props.bbox.height}},
      {"visibility", props.visibility},
      {"clickable", props.clickable},
      {"set_of_marks", props.set_of_marks}};
}

void from_json(const nlohmann::json& j, ExtraProps& props) {
  const auto& b = j.at("bbox");
  props.bbox = Box{b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                   b.at(3).get<double>()};
  props.visibility = j.at("visibility").get<double>();
  props.clickable = j.at("clickable").get<bool>();
  props.set_of_marks = j.at("set_of_marks").get<bool>();
}

}  // namespace wgym
