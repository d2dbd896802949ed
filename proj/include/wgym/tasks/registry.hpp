#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "wgym/tasks/task.hpp"

namespace wgym {

using TaskFactory = std::function<std::unique_ptr<Task>()>;

class TaskRegistry {
 public:
  // Process-wide registry, preloaded with the built-in tasks.
  static TaskRegistry& global();

  // Throws RegistrationError for a duplicate id. An empty spec.id is filled
  // from `id`, an empty template name from the id as well.
  void register_task(std::string id, TaskFactory factory, TaskSpec spec = {});
  bool contains(std::string_view id) const;
  // Throws RegistrationError naming the id when it is unknown.
  std::unique_ptr<Task> create(std::string_view id) const;
  TaskSpec spec(std::string_view id) const;
  std::vector<std::string> ids() const;

 private:
  struct Entry {
    TaskFactory factory;
    TaskSpec spec;
  };
  mutable std::mutex mu_;
  std::map<std::string, Entry, std::less<>> entries_;
};

// Registers into the global registry.
void register_task(std::string id, TaskFactory factory, TaskSpec spec = {});

template <typename T>
void register_task(std::string id, TaskSpec spec = {}) {
  register_task(std::move(id), [] { return std::make_unique<T>(); }, std::move(spec));
}

}  // namespace wgym
