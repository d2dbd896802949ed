#include "wgym/study/metrics.hpp"

#include <cmath>

#include <fmt/format.h>

#include "wgym/common/errors.hpp"

namespace wgym {

std::string_view to_string(EpisodeStatus s) {
  switch (s) {
    case EpisodeStatus::success:
      return "success";
    case EpisodeStatus::failure:
      return "failure";
    case EpisodeStatus::error:
      return "error";
    case EpisodeStatus::incomplete:
      return "incomplete";
  }
  return "";
}

EpisodeStatus episode_status_from_string(std::string_view name) {
  for (auto s : {EpisodeStatus::success, EpisodeStatus::failure, EpisodeStatus::error,
                 EpisodeStatus::incomplete}) {
    if (to_string(s) == name) return s;
  }
  throw ConfigError(fmt::format("unknown episode status '{}'", name));
}

bool EpisodeResult::consistent() const {
  if (status == EpisodeStatus::error && !error_message) return false;
  if ((status == EpisodeStatus::success) != (reward >= 1.0) &&
      (status == EpisodeStatus::success || status == EpisodeStatus::failure)) {
    return false;
  }
  return true;
}

void to_json(nlohmann::json& j, const EpisodeResult& r) {
  j = nlohmann::json{{"status", to_string(r.status)}, {"reward", r.reward},
                     {"n_steps", r.n_steps},          {"usage", r.usage},
                     {"elapsed_ms", r.elapsed_ms},    {"terminated", r.terminated},
                     {"truncated", r.truncated}};
  j["error_message"] = r.error_message ? nlohmann::json(*r.error_message) : nlohmann::json();
}

void from_json(const nlohmann::json& j, EpisodeResult& r) {
  r.status = episode_status_from_string(j.at("status").get<std::string>());
  r.reward = j.at("reward").get<double>();
  r.n_steps = j.at("n_steps").get<int>();
  r.usage = j.at("usage").get<Usage>();
  r.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
  r.terminated = j.value("terminated", false);
  r.truncated = j.value("truncated", false);
  r.error_message.reset();
  if (j.contains("error_message") && j["error_message"].is_string()) {
    r.error_message = j["error_message"].get<std::string>();
  }
}

std::string_view to_string(SigmaKind k) {
  return k == SigmaKind::population ? "population" : "sample";
}

SigmaKind sigma_kind_from_string(std::string_view name) {
  if (name == "population") return SigmaKind::population;
  if (name == "sample") return SigmaKind::sample;
  throw ConfigError(fmt::format("unknown sigma kind '{}'", name));
}

SuccessStat success_stat(const std::vector<bool>& indicators, SigmaKind kind) {
  const std::size_t n = indicators.size();
  if (n == 0) throw AggregationError("no finished episodes to aggregate");
  if (kind == SigmaKind::sample && n < 2) {
    throw AggregationError("sample sigma needs at least two episodes");
  }
  std::size_t hits = 0;
  for (bool b : indicators) hits += b ? 1 : 0;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  double ss = 0;
  for (bool b : indicators) {
    const double d = (b ? 1.0 : 0.0) - p;
    ss += d * d;
  }
  const double denom = kind == SigmaKind::population ? static_cast<double>(n)
                                                     : static_cast<double>(n - 1);
  const double sigma = std::sqrt(ss / denom);
  return {p, sigma / std::sqrt(static_cast<double>(n)), n};
}

void to_json(nlohmann::json& j, const SuccessStat& s) {
  j = nlohmann::json{{"success_rate", s.success_rate}, {"std_error", s.std_error}, {"n", s.n}};
}

void to_json(nlohmann::json& j, const Metrics& m) {
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [k, v] : m.by_category) cats[k] = v;
  j = nlohmann::json{{"overall", m.overall},       {"by_category", cats},
                     {"n_errors", m.n_errors},     {"n_incomplete", m.n_incomplete},
                     {"mean_reward", m.mean_reward}, {"mean_steps", m.mean_steps},
                     {"usage", m.usage}};
}

Metrics aggregate_results(const std::vector<CategorizedResult>& results, SigmaKind kind) {
  Metrics m;
  std::vector<bool> all;
  std::map<std::string, std::vector<bool>> cats;
  double reward = 0;
  double steps = 0;
  for (const auto& r : results) {
    m.usage += r.result.usage;
    if (r.result.status == EpisodeStatus::error) {
      ++m.n_errors;
      continue;
    }
    if (r.result.status == EpisodeStatus::incomplete) {
      ++m.n_incomplete;
      continue;
    }
    const bool ok = r.result.status == EpisodeStatus::success;
    all.push_back(ok);
    if (!r.category.empty()) cats[r.category].push_back(ok);
    reward += r.result.reward;
    steps += r.result.n_steps;
  }
  m.overall = success_stat(all, kind);
  for (const auto& [k, v] : cats) {
    // A category with one episode has no sample sigma; fall back to zero.
    if (kind == SigmaKind::sample && v.size() < 2) {
      m.by_category[k] = {v[0] ? 1.0 : 0.0, 0.0, 1};
    } else {
      m.by_category[k] = success_stat(v, kind);
    }
  }
  m.mean_reward = reward / static_cast<double>(all.size());
  m.mean_steps = steps / static_cast<double>(all.size());
  return m;
}

}  // namespace wgym
