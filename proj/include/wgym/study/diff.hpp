#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wgym {

struct DiffLine {
  enum class Op { keep, remove, add };
  Op op;
  std::string text;
};

// Shortest line edit script from `a` to `b`.
std::vector<DiffLine> diff_lines(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Unified diff with `context` lines around changes; "" when equal.
std::string unified_diff(std::string_view a, std::string_view b, std::string_view from_label = "a",
                         std::string_view to_label = "b", int context = 3);

}  // namespace wgym
