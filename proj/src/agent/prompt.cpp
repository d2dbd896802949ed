#include "wgym/agent/prompt.hpp"

#include <map>
#include <sstream>

#include <fmt/format.h>

#include "wgym/common/errors.hpp"

namespace wgym {

namespace {

std::vector<std::string> split_lines(const std::string& body) {
  std::vector<std::string> out;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

const std::string kElided = "...";

}  // namespace

std::string_view to_string(ShrinkStrategy s) {
  switch (s) {
    case ShrinkStrategy::non_shrinkable:
      return "non-shrinkable";
    case ShrinkStrategy::drop_oldest:
      return "drop-oldest-history";
    case ShrinkStrategy::truncate_bottom:
      return "truncate-bottom";
    case ShrinkStrategy::elide_middle:
      return "elide-middle";
  }
  return "";
}

PromptComponent PromptComponent::fixed(std::string label, std::string text) {
  PromptComponent c;
  c.label = std::move(label);
  c.header = std::move(text);
  return c;
}

PromptComponent PromptComponent::text(std::string label, std::string header,
                                      const std::string& body, int priority,
                                      ShrinkStrategy strategy, std::string footer) {
  PromptComponent c;
  c.label = std::move(label);
  c.header = std::move(header);
  c.units = split_lines(body);
  c.footer = std::move(footer);
  c.shrink_priority = priority;
  c.shrink = strategy;
  return c;
}

PromptComponent PromptComponent::history(std::string label, std::string header,
                                         std::vector<std::string> entries, int priority) {
  PromptComponent c;
  c.label = std::move(label);
  c.header = std::move(header);
  c.units = std::move(entries);
  c.shrink_priority = priority;
  c.shrink = ShrinkStrategy::drop_oldest;
  return c;
}

std::string PromptComponent::render() const {
  std::string out = header;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (i) out += separator;
    if (shrink == ShrinkStrategy::elide_middle && removed > 0 && i == units.size() / 2) {
      out += kElided + separator;
    }
    out += units[i];
  }
  if (shrink == ShrinkStrategy::elide_middle && removed > 0 && units.empty()) out += kElided;
  return out + footer;
}

std::string PromptComponent::minimal() const {
  PromptComponent c = *this;
  c.removed += c.units.size();
  c.units.clear();
  return c.render();
}

bool PromptComponent::can_shrink() const {
  return shrink != ShrinkStrategy::non_shrinkable && !units.empty();
}

void PromptComponent::shrink_step() {
  if (!can_shrink()) return;
  std::size_t n = 1;
  if (shrink != ShrinkStrategy::drop_oldest) n = std::max<std::size_t>(1, (units.size() + 19) / 20);
  switch (shrink) {
    case ShrinkStrategy::drop_oldest:
      units.erase(units.begin());
      break;
    case ShrinkStrategy::truncate_bottom:
      units.resize(units.size() - n);
      break;
    case ShrinkStrategy::elide_middle: {
      const std::size_t start = (units.size() - n) / 2;
      units.erase(units.begin() + static_cast<std::ptrdiff_t>(start),
                  units.begin() + static_cast<std::ptrdiff_t>(start + n));
      break;
    }
    case ShrinkStrategy::non_shrinkable:
      return;
  }
  removed += n;
}

std::string concat(const std::vector<PromptComponent>& components) {
  std::string out;
  bool first = true;
  for (const auto& c : components) {
    std::string r = c.render();
    if (r.empty()) continue;
    if (!first) out += '\n';
    out += r;
    first = false;
  }
  return out;
}

FitResult fit_tokens(std::vector<PromptComponent> components, std::size_t budget,
                     const TokenCounter& counter) {
  std::vector<PromptComponent> floor_form = components;
  for (auto& c : floor_form) {
    c.removed += c.units.size();
    c.units.clear();
  }
  const std::size_t floor = counter(concat(floor_form));
  if (floor > budget) {
    throw ConfigError(fmt::format(
        "prompt budget of {} tokens is below the {} tokens that cannot be shrunk", budget, floor));
  }

  FitResult result;
  std::map<int, std::size_t> cursor;  // round robin position per priority
  std::string text = concat(components);
  std::size_t tokens = counter(text);
  while (tokens > budget) {
    int best = 0;
    bool any = false;
    for (const auto& c : components) {
      if (c.can_shrink() && (!any || c.shrink_priority < best)) {
        best = c.shrink_priority;
        any = true;
      }
    }
    if (!any) {
      result.overflow = true;
      break;
    }
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (components[i].can_shrink() && components[i].shrink_priority == best) tied.push_back(i);
    }
    auto& pos = cursor[best];
    PromptComponent& target = components[tied[pos % tied.size()]];
    ++pos;
    const std::size_t before = counter(target.render());
    do {
      target.shrink_step();
    } while (target.can_shrink() && counter(target.render()) >= before);
    result.shrink_log.push_back(target.label);
    text = concat(components);
    tokens = counter(text);
  }
  result.text = std::move(text);
  result.tokens = tokens;
  result.components = std::move(components);
  return result;
}

}  // namespace wgym
