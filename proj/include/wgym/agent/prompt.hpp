#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wgym/llm/tokens.hpp"

namespace wgym {

enum class ShrinkStrategy { non_shrinkable, drop_oldest, truncate_bottom, elide_middle };

std::string_view to_string(ShrinkStrategy s);

// A section of a prompt. `header` and `footer` are always kept; `units`
// (history entries or lines) are what shrinking removes.
struct PromptComponent {
  std::string label;
  std::string header;
  std::vector<std::string> units;
  std::string separator = "\n";
  std::string footer;
  // Lower values shrink first.
  int shrink_priority = 0;
  ShrinkStrategy shrink = ShrinkStrategy::non_shrinkable;
  std::size_t removed = 0;

  static PromptComponent fixed(std::string label, std::string text);
  // Lines of `body`, shrunk with `strategy`.
  static PromptComponent text(std::string label, std::string header, const std::string& body,
                              int priority, ShrinkStrategy strategy, std::string footer = {});
  static PromptComponent history(std::string label, std::string header,
                                 std::vector<std::string> entries, int priority);

  std::string render() const;
  // The form left when every unit has been removed.
  std::string minimal() const;
  bool can_shrink() const;
  // Removes a batch of units: one history entry, or about 5% of the lines.
  void shrink_step();
};

// Renders joined with newlines; empty renders are skipped.
std::string concat(const std::vector<PromptComponent>& components);

struct FitResult {
  std::string text;
  std::size_t tokens = 0;
  // Could not get under budget even at the minimal form.
  bool overflow = false;
  // Label of the component shrunk at each iteration.
  std::vector<std::string> shrink_log;
  std::vector<PromptComponent> components;
};

// While over budget, shrinks the shrinkable component with the lowest
// priority (round robin on ties) until its own token count drops. Throws
// ConfigError when the budget is below the non-shrinkable floor.
FitResult fit_tokens(std::vector<PromptComponent> components, std::size_t budget,
                     const TokenCounter& counter = default_token_counter());

}  // namespace wgym
