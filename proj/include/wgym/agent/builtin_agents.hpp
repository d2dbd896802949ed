#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wgym/actions/parser.hpp"
#include "wgym/agent/agent.hpp"

namespace wgym {

// Emits the task's known-good action sequence. Needs EpisodeContext.task.
class OracleAgent : public Agent {
 public:
  void begin_episode(const EpisodeContext& ctx) override;
  ProcessedObs obs_preprocessor(const Observation& obs) override;
  AgentStep get_action(const ProcessedObs& obs) override;

 private:
  std::vector<std::string> actions_;
  std::size_t next_ = 0;
};

// Uniform choice among the enabled primitives with random arguments. Bids
// come from the observed element properties. Deterministic in
// (random_seed, task id, episode seed).
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t random_seed = 0) : random_seed_(random_seed) {}

  void begin_episode(const EpisodeContext& ctx) override;
  // {"bids": [...], "tabs": n}
  ProcessedObs obs_preprocessor(const Observation& obs) override;
  AgentStep get_action(const ProcessedObs& obs) override;

 private:
  std::uint64_t random_seed_;
  std::uint64_t stream_seed_ = 0;
  std::string stream_key_;
  std::uint64_t draws_ = 0;
  std::vector<const ActionPrimitive*> enabled_;
};

// Emits a fixed list of actions; a step past the end fails.
class ReplayAgent : public Agent {
 public:
  explicit ReplayAgent(std::vector<std::string> actions) : actions_(std::move(actions)) {}

  void begin_episode(const EpisodeContext&) override { next_ = 0; }
  AgentStep get_action(const ProcessedObs& obs) override;

 private:
  std::vector<std::string> actions_;
  std::size_t next_ = 0;
};

}  // namespace wgym
