#include "wgym/llm/usage.hpp"

namespace wgym {

Usage& Usage::operator+=(const Usage& other) {
  prompt_tokens += other.prompt_tokens;
  completion_tokens += other.completion_tokens;
  cost += other.cost;
  estimated = estimated || other.estimated;
  return *this;
}

double usage_cost(std::int64_t prompt_tokens, std::int64_t completion_tokens,
                  double price_per_1k_prompt, double price_per_1k_completion) {
  return static_cast<double>(prompt_tokens) / 1000.0 * price_per_1k_prompt +
         static_cast<double>(completion_tokens) / 1000.0 * price_per_1k_completion;
}

UsageTracker::UsageTracker(const UsageTracker& other) {
  std::lock_guard lock(other.mu_);
  totals_ = other.totals_;
  calls_ = other.calls_;
}

UsageTracker& UsageTracker::operator=(const UsageTracker& other) {
  if (this == &other) return *this;
  Usage t;
  std::int64_t c;
  {
    std::lock_guard lock(other.mu_);
    t = other.totals_;
    c = other.calls_;
  }
  std::lock_guard lock(mu_);
  totals_ = t;
  calls_ = c;
  return *this;
}

void UsageTracker::track(const Usage& usage) {
  std::lock_guard lock(mu_);
  totals_ += usage;
  ++calls_;
}

void UsageTracker::merge(const UsageTracker& other) {
  Usage t;
  std::int64_t c;
  {
    std::lock_guard lock(other.mu_);
    t = other.totals_;
    c = other.calls_;
  }
  std::lock_guard lock(mu_);
  totals_ += t;
  calls_ += c;
}

Usage UsageTracker::totals() const {
  std::lock_guard lock(mu_);
  return totals_;
}

std::int64_t UsageTracker::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

void to_json(nlohmann::json& j, const Usage& u) {
  j = nlohmann::json{{"prompt_tokens", u.prompt_tokens},
                     {"completion_tokens", u.completion_tokens},
                     {"cost", u.cost},
                     {"estimated", u.estimated}};
}

void from_json(const nlohmann::json& j, Usage& u) {
  u.prompt_tokens = j.at("prompt_tokens").get<std::int64_t>();
  u.completion_tokens = j.at("completion_tokens").get<std::int64_t>();
  u.cost = j.at("cost").get<double>();
  u.estimated = j.value("estimated", false);
}

}  // namespace wgym
