#pragma once

#include "wgym/backend/page.hpp"

namespace wgym {

inline constexpr double kCharWidth = 8;
inline constexpr double kLineHeight = 30;

// Fixed height of an empty block element of the given tag.
double block_height(std::string_view tag);

// Vertical-flow layout. Block nodes stack top to bottom at full available
// width; inline nodes flow left to right and wrap. Nodes with an explicit
// box override keep it verbatim and are taken out of the flow. Hidden nodes
// collapse to a zero box. The root spans at least the viewport.
void layout(PageModel& page);

// Deepest attached node whose box contains the page-space point. Nodes that
// intercept pointer events win over everything else.
std::optional<NodeId> hit_test(const PageModel& page, double x, double y);

// Page-space rectangle currently shown in the viewport.
Box viewport_rect(const Viewport& viewport);

// area(box ∩ viewport) / area(box); 0 for an empty box.
double visibility_ratio(const Box& box, const Viewport& viewport);

}  // namespace wgym
