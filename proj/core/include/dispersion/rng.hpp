#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>

namespace dispersion {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t value) noexcept {
  return mix64(h ^ (value + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Counter-based random stream. Cheap to create, so every robot gets a fresh
/// stream per round keyed by simulator bookkeeping; the key never reaches
/// robot logic.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  constexpr explicit RandomStream(std::uint64_t key = 0) noexcept : state_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Fair coin; true is heads.
  bool coin() noexcept { return ((*this)() >> 63) != 0; }

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(*this);
  }

 private:
  std::uint64_t state_;
};

inline RandomStream derive_stream(std::uint64_t seed, std::uint64_t round, std::uint64_t node,
                                  std::uint64_t arrival_index, std::uint64_t salt = 0) {
  std::uint64_t h = mix64(seed ^ 0x64697370ULL);
  h = hash_combine(h, round);
  h = hash_combine(h, node);
  h = hash_combine(h, arrival_index);
  h = hash_combine(h, salt);
  return RandomStream(h);
}

}  // namespace dispersion
