#include "wgym/actions/describe.hpp"

#include <fmt/format.h>

namespace wgym {

namespace {

const char* const kFooter = "Only a single action can be provided at once. Example:\n";

std::string footer_example(const std::vector<const ActionPrimitive*>& enabled) {
  for (const auto* p : enabled) {
    if (p->name == "fill") return p->usage_examples.back();
  }
  return enabled.front()->usage_examples.front();
}

}  // namespace

std::string ActionSet::describe() const {
  const bool verbose = config_.long_description || config_.individual_examples;
  std::string out = fmt::format("{} different types of actions are available.\n\n", enabled_.size());
  for (const auto* p : enabled_) {
    out += p->signature() + "\n";
    if (config_.long_description) out += "    Description: " + p->long_description + "\n";
    if (config_.individual_examples) {
      out += "    Examples:\n";
      for (const auto& ex : p->usage_examples) out += "        " + ex + "\n";
    }
    if (verbose) out += "\n";
  }
  out += kFooter;
  out += footer_example(enabled_);
  return out;
}

std::string describe(const ActionSetConfig& config) { return ActionSet(config).describe(); }

}  // namespace wgym
