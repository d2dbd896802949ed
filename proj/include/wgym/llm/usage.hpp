#pragma once

#include <cstdint>
#include <mutex>

#include <json.hpp>

namespace wgym {

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  double cost = 0;
  // Token counts came from the local counter, not the provider.
  bool estimated = false;

  Usage& operator+=(const Usage& other);
  friend Usage operator+(Usage a, const Usage& b) { return a += b; }
  bool operator==(const Usage&) const = default;
};

// cost = prompt/1000 * price_prompt + completion/1000 * price_completion
double usage_cost(std::int64_t prompt_tokens, std::int64_t completion_tokens,
                  double price_per_1k_prompt, double price_per_1k_completion);

// Running totals; safe to share between threads.
class UsageTracker {
 public:
  UsageTracker() = default;
  UsageTracker(const UsageTracker& other);
  UsageTracker& operator=(const UsageTracker& other);

  void track(const Usage& usage);
  void merge(const UsageTracker& other);
  Usage totals() const;
  std::int64_t calls() const;

 private:
  mutable std::mutex mu_;
  Usage totals_;
  std::int64_t calls_ = 0;
};

void to_json(nlohmann::json& j, const Usage& u);
void from_json(const nlohmann::json& j, Usage& u);

}  // namespace wgym
