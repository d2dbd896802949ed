#include "wgym/common/rng.hpp"

#include <numeric>
#include <stdexcept>

namespace wgym {

std::uint64_t stable_hash(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

SeededStream::SeededStream(std::string_view key, std::uint64_t seed)
    : base_(splitmix64(stable_hash(key) ^ splitmix64(seed))) {}

std::uint64_t SeededStream::next() { return splitmix64(base_ + 0x632be59bd9b4e019ull * ++counter_); }

std::uint64_t SeededStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("SeededStream::below: bound must be positive");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return v % bound;
}

std::int64_t SeededStream::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("SeededStream::between: empty range");
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double SeededStream::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<std::size_t> SeededStream::sample_indices(std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("SeededStream::sample_indices: k > n");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + below(n - i);
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

}  // namespace wgym
