#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bar {

/*
Counter-based random stream.

Output k of stream (seed, stream_id) is a pure function of (seed, stream_id, k):
    key  = mix(seed ^ mix(stream_id + C))
    x_k  = mix(key ^ mix(k))
where mix is the SplitMix64 finalizer (a bijection on 64-bit words). Trials use
stream_id = trial index, so results never depend on which thread ran which trial.

All derived draws (uniform reals, bounded integers, Bernoulli) are implemented
here rather than through <random> distributions, whose output is not specified
bit-for-bit across standard library implementations.
*/
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  /// Number of 64-bit words drawn so far.
  std::uint64_t position() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// 1 with probability p (p in [0,1]), else 0.
  int bernoulli(double p) noexcept;

  /// Uniformly random subset of `count` elements of `items`, returned in draw
  /// order (partial Fisher-Yates on a copy).
  template <typename T>
  std::vector<T> sample_without_replacement(std::span<const T> items, std::size_t count);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t x) noexcept;

template <typename T>
std::vector<T> RngStream::sample_without_replacement(std::span<const T> items,
                                                     std::size_t count) {
  std::vector<T> pool(items.begin(), items.end());
  if (count > pool.size()) count = pool.size();
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace bar
