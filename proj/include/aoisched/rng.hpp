#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace aoisched {

/// Tags separating the independent random streams consumed by the simulator.
enum class Purpose : std::uint64_t {
  Geometry = 1,
  Arrival = 2,
  Transmit = 3,
  Success = 4,
  Fading = 5,
  Test = 99,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a sequence of 64-bit words into one key. Order matters.
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                   std::uint64_t c = 0, std::uint64_t d = 0) noexcept {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  h = mix64(h ^ d);
  return h;
}

/// Counter-based random stream. The state is a (key, counter) pair, so a
/// stream for a given key yields the same draws no matter which thread or in
/// which order it is created.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Stream(std::uint64_t key) noexcept : key_(key) {}

  /// Stream for one (realization, entity, slot, purpose) tuple.
  static constexpr Stream keyed(std::uint64_t seed, std::uint64_t realization, std::uint64_t entity,
                                std::uint64_t slot, Purpose purpose) noexcept {
    return Stream(derive_key(seed, realization, entity, slot, static_cast<std::uint64_t>(purpose)));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return mix64(key_ + 0xd1b54a32d192ed03ULL * ++counter_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_zero() noexcept { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Exp(1) by inversion.
  double exponential() noexcept { return -std::log(uniform_open_zero()); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace aoisched
