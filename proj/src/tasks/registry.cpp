#include "wgym/tasks/registry.hpp"

#include "wgym/common/errors.hpp"
#include "wgym/tasks/examples.hpp"
#include "wgym/tasks/synthetic.hpp"

namespace wgym {

TaskRegistry& TaskRegistry::global() {
  static TaskRegistry* registry = [] {
    auto* r = new TaskRegistry;
    register_synthetic_tasks(*r);
    register_example_tasks(*r);
    return r;
  }();
  return *registry;
}

void TaskRegistry::register_task(std::string id, TaskFactory factory, TaskSpec spec) {
  if (id.empty()) throw RegistrationError("task id must not be empty");
  if (!factory) throw RegistrationError("task '" + id + "' has no factory");
  if (spec.id.empty()) spec.id = id;
  if (spec.template_name.empty()) spec.template_name = id;
  if (spec.default_max_steps < 1) {
    throw RegistrationError("task '" + id + "' needs default_max_steps >= 1");
  }
  std::lock_guard lock(mu_);
  if (entries_.count(id)) throw RegistrationError("task already registered: " + id);
  entries_.emplace(std::move(id), Entry{std::move(factory), std::move(spec)});
}

bool TaskRegistry::contains(std::string_view id) const {
  std::lock_guard lock(mu_);
  return entries_.find(id) != entries_.end();
}

std::unique_ptr<Task> TaskRegistry::create(std::string_view id) const {
  TaskFactory factory;
  {
    std::lock_guard lock(mu_);
    auto it = entries_.find(id);
    if (it == entries_.end()) throw RegistrationError("unknown task: " + std::string(id));
    factory = it->second.factory;
  }
  return factory();
}

TaskSpec TaskRegistry::spec(std::string_view id) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(id);
  if (it == entries_.end()) throw RegistrationError("unknown task: " + std::string(id));
  return it->second.spec;
}

std::vector<std::string> TaskRegistry::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : entries_) out.push_back(id);
  return out;
}

void register_task(std::string id, TaskFactory factory, TaskSpec spec) {
  TaskRegistry::global().register_task(std::move(id), std::move(factory), std::move(spec));
}

}  // namespace wgym
