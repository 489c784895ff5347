#pragma once

#include <cstdint>
#include <vector>

namespace rboost {

/// SplitMix64 output function (Steele, Lea & Flood). Bijective on 64 bits.
std::uint64_t splitmix64_mix(std::uint64_t z) noexcept;

/// Derives an independent stream key from a master seed and a stream id.
/// Class r of a projection bank uses stream r; verifier trial t uses t + 1.
std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Counter-based 64-bit generator: the i-th draw is splitmix64_mix(key + i * golden),
/// i = 1, 2, ... This is SplitMix64 with its state initialised to `key`, so the
/// sequence is fully determined by integer arithmetic and identical on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;

  /// Uniform on (0, 1]; safe as a log argument.
  double uniform_open_zero() noexcept;

  /// Unbiased integer in [0, bound) (Lemire's multiply-and-reject). bound > 0.
  std::uint64_t bounded(std::uint64_t bound) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Standard normal variates by the Box–Muller transform over a CounterRng.
/// Each pair of uniforms (u1 in (0,1], u2 in [0,1)) yields r*cos(2*pi*u2) and then
/// r*sin(2*pi*u2) with r = sqrt(-2 ln u1).
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t key) noexcept : rng_(key) {}

  double next() noexcept;

  CounterRng& rng() noexcept { return rng_; }

 private:
  CounterRng rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// In-place Fisher–Yates shuffle driven by `rng`.
template <typename T>
void shuffle(std::vector<T>& items, CounterRng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.bounded(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace rboost
