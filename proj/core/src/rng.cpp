#include "bar/rng.hpp"

#include "bar/errors.hpp"

namespace bar {

namespace {
constexpr std::uint64_t kStreamSalt = 0x632BE59BD9B4E019ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed),
      stream_id_(stream_id),
      key_(splitmix64_mix(seed ^ splitmix64_mix(stream_id + kStreamSalt))) {}

std::uint64_t RngStream::next_u64() noexcept {
  return splitmix64_mix(key_ ^ splitmix64_mix(counter_++));
}

double RngStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw InputError("uniform_below: bound must be positive");
  // Lemire's multiply-shift with rejection; exact uniformity.
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

int RngStream::bernoulli(double p) noexcept { return uniform() < p ? 1 : 0; }

}  // namespace bar
