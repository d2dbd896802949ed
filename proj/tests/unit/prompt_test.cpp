#include <gtest/gtest.h>

#include <algorithm>

#include "wgym/agent/generic_agent.hpp"
#include "wgym/agent/prompt.hpp"
#include "wgym/common/errors.hpp"
#include "wgym/common/rng.hpp"
#include "wgym/backend/browser.hpp"
#include "wgym/observation/observation.hpp"

namespace wgym {
namespace {

const char* kGoal = "Open the details of row 57.";

// A long listing page so that observation text dominates the fixed sections.
std::vector<PromptComponent> sample_prompt(int history_len = 12) {
  SimBrowser b;
  b.register_page("local://rows", [](PageModel& p, std::uint64_t) {
    p.set_title("Rows");
    NodeId list = p.append(p.root(), "ul", {{"id", "rows"}});
    for (int i = 0; i < 120; ++i) {
      NodeId li = p.append(list, "li", {}, "row " + std::to_string(i));
      p.append(li, "button", {{"type", "button"}}, "Open row " + std::to_string(i));
    }
  });
  if (b.execute(cmd::Goto{"local://rows"}, 500)) throw std::runtime_error("goto failed");
  auto obs = build_observation(b, {ContentPart::text(kGoal)}, {}, "Error: element is not visible");
  GenericFlags flags;
  flags.obs.use_html = true;
  std::vector<HistoryStep> history;
  for (int i = 0; i < history_len; ++i) {
    history.push_back({"The list is long, I scroll down to look for the next rows, step " +
                           std::to_string(i) + ".",
                       "scroll(0, 300)", ""});
  }
  return build_generic_prompt(flags, generic_preprocess(flags.obs, obs), history);
}

const PromptComponent& by_label(const std::vector<PromptComponent>& cs, const std::string& l) {
  auto it = std::find_if(cs.begin(), cs.end(), [&](const auto& c) { return c.label == l; });
  if (it == cs.end()) throw std::runtime_error("no component " + l);
  return *it;
}

TEST(PromptComponent, RenderAndMinimal) {
  auto c = PromptComponent::text("t", "H\n", "a\nb\nc", 0, ShrinkStrategy::truncate_bottom, "F");
  EXPECT_EQ(c.render(), "H\na\nb\ncF");
  EXPECT_EQ(c.minimal(), "H\nF");
  c.shrink_step();
  EXPECT_EQ(c.render(), "H\na\nbF");
  EXPECT_EQ(c.removed, 1u);
}

TEST(PromptComponent, DropOldestRemovesFirstEntry) {
  auto h = PromptComponent::history("h", "", {"one", "two", "three"}, 0);
  h.shrink_step();
  EXPECT_EQ(h.units, (std::vector<std::string>{"two", "three"}));
}

TEST(PromptComponent, ElideMiddleMarksGap) {
  auto c = PromptComponent::text("t", "", "1\n2\n3\n4\n5", 0, ShrinkStrategy::elide_middle);
  c.shrink_step();
  EXPECT_NE(c.render().find("..."), std::string::npos);
  EXPECT_EQ(c.render().find("3"), std::string::npos);
  EXPECT_EQ(c.render().substr(0, 1), "1");
}

TEST(PromptComponent, FixedNeverShrinks) {
  auto c = PromptComponent::fixed("f", "abc");
  EXPECT_FALSE(c.can_shrink());
  c.shrink_step();
  EXPECT_EQ(c.render(), "abc");
}

TEST(FitTokens, UnderBudgetIsUnchanged) {
  auto cs = sample_prompt();
  const std::string full = concat(cs);
  const auto tokens = count_tokens(full);
  auto fit = fit_tokens(cs, tokens);
  EXPECT_EQ(fit.text, full);
  EXPECT_EQ(fit.tokens, tokens);
  EXPECT_TRUE(fit.shrink_log.empty());
  EXPECT_FALSE(fit.overflow);
}

TEST(FitTokens, HistoryShrinksFirstOldestFirst) {
  auto cs = sample_prompt();
  const auto tokens = count_tokens(concat(cs));
  auto fit = fit_tokens(cs, tokens - 1);
  ASSERT_FALSE(fit.shrink_log.empty());
  EXPECT_EQ(fit.shrink_log.front(), "history");
  const auto& h = by_label(fit.components, "history");
  EXPECT_EQ(h.units.front().rfind("## step 1\n", 0), 0u) << h.units.front();
  EXPECT_EQ(by_label(fit.components, "html").removed, 0u);
}

TEST(FitTokens, OrderHistoryThenHtmlThenAxtree) {
  auto cs = sample_prompt();
  const auto full = count_tokens(concat(cs));
  for (double frac : {1.0, 0.5, 0.25}) {
    const auto budget = static_cast<std::size_t>(static_cast<double>(full) * frac);
    auto fit = fit_tokens(cs, budget);
    EXPECT_LE(fit.tokens, budget) << frac;
    EXPECT_FALSE(fit.overflow);
    EXPECT_NE(fit.text.find(kGoal), std::string::npos);
    auto rank = [](const std::string& l) { return l == "history" ? 0 : l == "html" ? 1 : 2; };
    for (std::size_t i = 1; i < fit.shrink_log.size(); ++i) {
      EXPECT_LE(rank(fit.shrink_log[i - 1]), rank(fit.shrink_log[i])) << frac;
    }
  }
}

TEST(FitTokens, BudgetBelowFloorThrows) {
  auto cs = sample_prompt();
  EXPECT_THROW(fit_tokens(cs, 10), ConfigError);
}

TEST(FitTokens, ErrorAndFixedSectionsSurviveShrinking) {
  auto cs = sample_prompt();
  std::vector<PromptComponent> floor = cs;
  for (auto& c : floor) {
    c.removed += c.units.size();
    c.units.clear();
  }
  const auto min_tokens = count_tokens(concat(floor));
  auto fit = fit_tokens(cs, min_tokens);
  EXPECT_LE(fit.tokens, min_tokens);
  EXPECT_NE(fit.text.find("## Error from previous action:"), std::string::npos);
  EXPECT_NE(fit.text.find("click('a324')"), std::string::npos);
}

TEST(FitTokens, MonotoneInBudget) {
  auto cs = sample_prompt();
  const auto full = count_tokens(concat(cs));
  SeededStream rng("fit-monotone", 1);
  std::vector<PromptComponent> floor = cs;
  for (auto& c : floor) c.units.clear();
  const auto lo = count_tokens(concat(floor));
  for (int i = 0; i < 30; ++i) {
    const auto a = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(lo),
                                                        static_cast<std::int64_t>(full)));
    const auto b = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(a),
                                                        static_cast<std::int64_t>(full)));
    auto fa = fit_tokens(cs, a);
    auto fb = fit_tokens(cs, b);
    EXPECT_LE(fa.tokens, a);
    EXPECT_LE(fb.tokens, b);
    EXPECT_LE(fb.shrink_log.size(), fa.shrink_log.size());
  }
}

TEST(FitTokens, CustomCounterIsUsed) {
  std::vector<PromptComponent> cs = {
      PromptComponent::fixed("goal", "G"),
      PromptComponent::text("body", "", "x\ny\nz", 0, ShrinkStrategy::truncate_bottom)};
  TokenCounter chars = [](std::string_view s) { return s.size(); };
  auto fit = fit_tokens(cs, 5, chars);
  EXPECT_EQ(fit.text, "G\nx\ny");
  EXPECT_EQ(fit.tokens, 5u);
}

}  // namespace
}  // namespace wgym
