#pragma once

#include <string>

#include "wgym/actions/parser.hpp"

namespace wgym {

// "<N> different types of actions are available." followed by one block per
// enabled primitive and the single-action footer. Same as
// ActionSet(config).describe().
std::string describe(const ActionSetConfig& config);

}  // namespace wgym
