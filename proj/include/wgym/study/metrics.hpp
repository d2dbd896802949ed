#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgym/llm/usage.hpp"

namespace wgym {

enum class EpisodeStatus { success, failure, error, incomplete };

std::string_view to_string(EpisodeStatus s);
EpisodeStatus episode_status_from_string(std::string_view name);

struct EpisodeResult {
  EpisodeStatus status = EpisodeStatus::incomplete;
  double reward = 0;
  int n_steps = 0;
  Usage usage;
  std::int64_t elapsed_ms = 0;
  std::optional<std::string> error_message;
  bool terminated = false;
  bool truncated = false;

  // success iff reward >= 1; error carries a message.
  bool consistent() const;
  bool operator==(const EpisodeResult&) const = default;
};

void to_json(nlohmann::json& j, const EpisodeResult& r);
void from_json(const nlohmann::json& j, EpisodeResult& r);

// How sigma is computed from the 0/1 success indicators.
enum class SigmaKind { population, sample };

std::string_view to_string(SigmaKind k);
SigmaKind sigma_kind_from_string(std::string_view name);

class AggregationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SuccessStat {
  double success_rate = 0;
  double std_error = 0;
  std::size_t n = 0;

  bool operator==(const SuccessStat&) const = default;
};

// Mean and sigma/sqrt(n) of the indicators. Throws AggregationError for an
// empty sample, and for SigmaKind::sample with n < 2.
SuccessStat success_stat(const std::vector<bool>& indicators,
                         SigmaKind kind = SigmaKind::population);

struct Metrics {
  // Over finished episodes (success or failure); errors and incomplete
  // episodes are counted separately and excluded from n.
  SuccessStat overall;
  std::map<std::string, SuccessStat> by_category;
  std::size_t n_errors = 0;
  std::size_t n_incomplete = 0;
  double mean_reward = 0;
  double mean_steps = 0;
  Usage usage;

  bool operator==(const Metrics&) const = default;
};

void to_json(nlohmann::json& j, const SuccessStat& s);
void to_json(nlohmann::json& j, const Metrics& m);

struct CategorizedResult {
  std::string category;
  EpisodeResult result;
};

// Throws AggregationError when no episode finished.
Metrics aggregate_results(const std::vector<CategorizedResult>& results,
                          SigmaKind kind = SigmaKind::population);

}  // namespace wgym
