#pragma once

#include <cstdint>
#include <initializer_list>

namespace ridgerec {

/// Counter-based generator: the output sequence is a pure function of
/// (key, position), so any draw can be regenerated without replaying the
/// stream. Uses the SplitMix64 finalizer as the block function.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key, std::uint64_t position = 0) noexcept
      : key_(key), position_(position) {}

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform on (0, 1].
  double uniform_open_zero() noexcept;

  /// Standard normal via Box-Muller (cosine branch only).
  double normal() noexcept;

  /// Uniform integer in [0, n) by rejection; n > 0.
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return position_; }

 private:
  std::uint64_t key_;
  std::uint64_t position_;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives an independent key from a parent key and a list of indices.
/// derive_key(seed, {grid, trial}) is the per-trial seeding rule.
std::uint64_t derive_key(std::uint64_t parent, std::initializer_list<std::uint64_t> path) noexcept;

/// Named sub-streams used when one trial seed drives several random objects.
enum class Stream : std::uint64_t {
  direction = 1,
  matrix = 2,
  noise = 3,
  probes = 4,
  sup_points = 5,
};

inline std::uint64_t derive_key(std::uint64_t parent, Stream s) noexcept {
  return derive_key(parent, {static_cast<std::uint64_t>(s)});
}

}  // namespace ridgerec
