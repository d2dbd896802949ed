#include "wgym/study/diff.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace wgym {

namespace {

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < s.size()) {
    const auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

}  // namespace

std::vector<DiffLine> diff_lines(const std::vector<std::string>& a,
                                 const std::vector<std::string>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int max = n + m;
  const int offset = max + 1;
  std::vector<int> v(static_cast<std::size_t>(2 * max + 3), 0);
  std::vector<std::vector<int>> trace;
  int found_d = -1;
  for (int d = 0; d <= max && found_d < 0; ++d) {
    trace.push_back(v);
    for (int k = -d; k <= d; k += 2) {
      int x;
      if (k == -d || (k != d && v[k - 1 + offset] < v[k + 1 + offset])) {
        x = v[k + 1 + offset];
      } else {
        x = v[k - 1 + offset] + 1;
      }
      int y = x - k;
      while (x < n && y < m && a[x] == b[y]) {
        ++x;
        ++y;
      }
      v[k + offset] = x;
      if (x >= n && y >= m) {
        found_d = d;
        break;
      }
    }
  }
  // Walk the trace backwards to recover the script.
  std::vector<DiffLine> out;
  int x = n;
  int y = m;
  for (int d = found_d; d >= 0; --d) {
    const auto& vd = trace[static_cast<std::size_t>(d)];
    const int k = x - y;
    int prev_k;
    if (k == -d || (k != d && vd[k - 1 + offset] < vd[k + 1 + offset])) {
      prev_k = k + 1;
    } else {
      prev_k = k - 1;
    }
    const int prev_x = d == 0 ? 0 : vd[prev_k + offset];
    const int prev_y = prev_x - prev_k;
    while (x > prev_x && y > prev_y) {
      out.push_back({DiffLine::Op::keep, a[--x]});
      --y;
    }
    if (d > 0) {
      if (x == prev_x) {
        out.push_back({DiffLine::Op::add, b[--y]});
      } else {
        out.push_back({DiffLine::Op::remove, a[--x]});
      }
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string unified_diff(std::string_view a, std::string_view b, std::string_view from_label,
                         std::string_view to_label, int context) {
  if (a == b) return {};
  const auto la = split_lines(a);
  const auto lb = split_lines(b);
  const auto script = diff_lines(la, lb);

  std::string out = fmt::format("--- {}\n+++ {}\n", from_label, to_label);
  if (la == lb) {
    // Only the trailing newline differs.
    return out + "@@ end of text @@\n\\ trailing newline differs\n";
  }
  const int total = static_cast<int>(script.size());
  int i = 0;
  while (i < total) {
    if (script[i].op == DiffLine::Op::keep) {
      ++i;
      continue;
    }
    // Extend the hunk while changes are within 2*context of each other.
    int start = std::max(0, i - context);
    int end = i;
    int last_change = i;
    while (end < total) {
      if (script[end].op != DiffLine::Op::keep) last_change = end;
      if (end - last_change > 2 * context) break;
      ++end;
    }
    end = std::min(total, last_change + context + 1);

    int a_line = 0;
    int b_line = 0;
    for (int j = 0; j < start; ++j) {
      if (script[j].op != DiffLine::Op::add) ++a_line;
      if (script[j].op != DiffLine::Op::remove) ++b_line;
    }
    int a_count = 0;
    int b_count = 0;
    std::string body;
    for (int j = start; j < end; ++j) {
      const auto& l = script[j];
      switch (l.op) {
        case DiffLine::Op::keep:
          body += " " + l.text + "\n";
          ++a_count;
          ++b_count;
          break;
        case DiffLine::Op::remove:
          body += "-" + l.text + "\n";
          ++a_count;
          break;
        case DiffLine::Op::add:
          body += "+" + l.text + "\n";
          ++b_count;
          break;
      }
    }
    out += fmt::format("@@ -{},{} +{},{} @@\n", a_count ? a_line + 1 : a_line, a_count,
                       b_count ? b_line + 1 : b_line, b_count);
    out += body;
    i = end;
  }
  return out;
}

}  // namespace wgym
