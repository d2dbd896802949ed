#pragma once

#include <string>
#include <vector>

#include "wgym/tasks/benchmark.hpp"
#include "wgym/tasks/registry.hpp"

namespace wgym {

// Ids of the ten seeded templates, "synth.click-button" and so on.
const std::vector<std::string>& synthetic_task_ids();

void register_synthetic_tasks(TaskRegistry& registry);

// The built-in "synthetic" benchmark: every template, 5 seeds, 10 steps.
Benchmark synthetic_benchmark();

}  // namespace wgym
