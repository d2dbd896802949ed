#pragma once

#include <stdexcept>
#include <string>

namespace wgym {

// Invalid configuration: flags, manifests, budgets. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API misuse, e.g. stepping a finished episode.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class RegistrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by a task's setup routine.
class SetupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Infrastructure failure of the page backend (not an agent mistake). Episodes
// hitting one are recorded with status "error" and are relaunchable.
class BackendFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wgym
