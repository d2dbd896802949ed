#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wgym {

// 64-bit FNV-1a; stable across platforms and standard library versions.
std::uint64_t stable_hash(std::string_view data);

std::uint64_t splitmix64(std::uint64_t x);

// Counter-based generator: the n-th draw is a pure function of
// (key, seed, n). There is no hidden global state, so two streams built from
// the same key and seed always agree.
class SeededStream {
 public:
  SeededStream(std::string_view key, std::uint64_t seed);

  std::uint64_t next();
  // Uniform in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  // Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  double unit();

  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[below(items.size())];
  }
  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

  // k distinct indices from [0, n), in draw order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace wgym
