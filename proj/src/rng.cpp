#include "ridgerec/rng.hpp"

#include <cmath>
#include <numbers>

namespace ridgerec {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_key(std::uint64_t parent, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t k = mix64(parent + kGamma);
  for (std::uint64_t p : path) {
    k = mix64(k ^ mix64(p + 0x632BE59BD9B4E019ULL));
  }
  return k;
}

std::uint64_t CounterRng::next_u64() noexcept {
  ++position_;
  return mix64(key_ + position_ * kGamma);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform_open_zero() noexcept {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  const double u1 = uniform_open_zero();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r = next_u64();
  while (r >= limit) r = next_u64();
  return r % n;
}

}  // namespace ridgerec
