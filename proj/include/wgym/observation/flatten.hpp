#pragma once

#include <limits>
#include <string>

#include "wgym/observation/axtree.hpp"
#include "wgym/observation/dom.hpp"

namespace wgym {

struct AXFlattenOptions {
  // A filtered-out node loses its own line; its children move up one level.
  bool filter_visible_only = false;
  bool filter_with_bid_only = false;
  bool filter_som_only = false;
  bool show_clickable = true;
  bool show_visible = true;
  bool show_coords = false;

  bool operator==(const AXFlattenOptions&) const = default;
};

// One line per node, two spaces of indentation per level:
//   [169] button 'Upvote', clickable, visible
//   StaticText '17705'
// The root passed in is the document node and is not rendered.
std::string flatten_axtree(const AXNode& root, const AXFlattenOptions& options = {});

struct HtmlFlattenOptions {
  // Elements at this depth keep their tags but their children become "...".
  std::size_t max_depth = std::numeric_limits<std::size_t>::max();
  // When set, skip elements whose visibility is at most the threshold.
  const PropsMap* props = nullptr;
  bool filter_visible_only = false;
  bool filter_with_bid_only = false;
};

// Indented markup with attributes in source order (bid included). The
// document root is not rendered; top-level nodes start at depth 0.
std::string flatten_html(const DomNode& dom, const HtmlFlattenOptions& options = {});

}  // namespace wgym
