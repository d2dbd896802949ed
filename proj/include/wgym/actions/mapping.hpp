#pragma once

#include <vector>

#include "wgym/actions/parser.hpp"
#include "wgym/backend/commands.hpp"

namespace wgym {

// Total over the catalog. Chat primitives become AppendChat commands, which
// the environment executes itself.
std::vector<BackendCommand> map_to_commands(const ParsedAction& action);

}  // namespace wgym
