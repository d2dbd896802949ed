#include <gtest/gtest.h>

#include "wgym/common/rng.hpp"
#include "wgym/study/diff.hpp"

namespace wgym {
namespace {

std::vector<std::string> random_lines(SeededStream& rng) {
  std::vector<std::string> out;
  const auto n = rng.below(12);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + rng.below(4))));
  return out;
}

TEST(DiffLines, ScriptReconstructsBothSides) {
  for (std::uint64_t k = 0; k < 300; ++k) {
    SeededStream rng("diff", k);
    auto a = random_lines(rng);
    auto b = random_lines(rng);
    std::vector<std::string> from, to;
    std::size_t edits = 0;
    for (const auto& d : diff_lines(a, b)) {
      if (d.op != DiffLine::Op::add) from.push_back(d.text);
      if (d.op != DiffLine::Op::remove) to.push_back(d.text);
      if (d.op != DiffLine::Op::keep) ++edits;
    }
    EXPECT_EQ(from, a);
    EXPECT_EQ(to, b);
    // Brute-force LCS bounds the edit count.
    std::vector<std::vector<std::size_t>> L(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = a.size(); i-- > 0;) {
      for (std::size_t j = b.size(); j-- > 0;) {
        L[i][j] = a[i] == b[j] ? L[i + 1][j + 1] + 1 : std::max(L[i + 1][j], L[i][j + 1]);
      }
    }
    EXPECT_EQ(edits, a.size() + b.size() - 2 * L[0][0]);
  }
}

TEST(UnifiedDiff, EmptyWhenEqual) {
  EXPECT_EQ(unified_diff("a\nb\n", "a\nb\n"), "");
  EXPECT_EQ(unified_diff("", ""), "");
}

TEST(UnifiedDiff, MarksChangedLines) {
  const auto d = unified_diff("one\ntwo\nthree", "one\nTWO\nthree", "old", "new");
  EXPECT_NE(d.find("--- old"), std::string::npos);
  EXPECT_NE(d.find("+++ new"), std::string::npos);
  EXPECT_NE(d.find("-two"), std::string::npos);
  EXPECT_NE(d.find("+TWO"), std::string::npos);
  EXPECT_NE(d.find(" one"), std::string::npos);
}

TEST(UnifiedDiff, ContextLimitsOutput) {
  std::string a, b;
  for (int i = 0; i < 40; ++i) {
    a += "line" + std::to_string(i) + "\n";
    b += (i == 20 ? std::string("changed") : "line" + std::to_string(i)) + "\n";
  }
  const auto d = unified_diff(a, b, "a", "b", 1);
  EXPECT_EQ(d.find("line10"), std::string::npos);
  EXPECT_NE(d.find(" line19"), std::string::npos);
  EXPECT_NE(d.find(" line21"), std::string::npos);
  EXPECT_EQ(d.find(" line22"), std::string::npos);
}

}  // namespace
}  // namespace wgym
