#include "rboost/random.hpp"

#include <cmath>
#include <numbers>

namespace rboost {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

__extension__ typedef unsigned __int128 u128;

}  // namespace

std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream_key(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64_mix(splitmix64_mix(seed + kGolden) ^
                        (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

std::uint64_t CounterRng::next_u64() noexcept {
  ++counter_;
  return splitmix64_mix(key_ + counter_ * kGolden);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double CounterRng::uniform_open_zero() noexcept {
  return static_cast<double>((next_u64() >> 11) + 1) * kTwoPow53Inv;
}

std::uint64_t CounterRng::bounded(std::uint64_t bound) noexcept {
  u128 product =
      static_cast<u128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t floor = (0 - bound) % bound;
    while (low < floor) {
      product = static_cast<u128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

double GaussianStream::next() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = rng_.uniform_open_zero();
  const double u2 = rng_.uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace rboost
