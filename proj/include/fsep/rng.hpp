#pragma once

#include <cstdint>

namespace fsep {

/// Independent random streams. Each stream is a separate keyed family of bits.
enum class Stream : std::uint64_t {
  conflict = 1,  ///< coin at an exclusion site targeted from both sides
  bond = 2,      ///< direction of a stack bond between two tall stacks
  sampler = 3,
  placement = 4,
  rotation = 5,
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t hash_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t a,
                                 std::uint64_t b) noexcept {
  std::uint64_t h = mix64(seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
  h = mix64(h ^ (a * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
  h = mix64(h ^ (b * 0xbf58476d1ce4e5b9ULL + 0x85157af5ULL));
  return h;
}

/**
 * Counter-based randomness for one time step of a dynamics.
 *
 * Every random decision is a pure function of (seed, stream, step, site), so
 * results do not depend on evaluation order or on the number of threads.
 * Bit `site % 64` of `word(stream, site / 64)` is the coin of `site`.
 */
struct RngContext {
  std::uint64_t seed = 0;
  std::uint64_t step = 0;

  std::uint64_t word(Stream s, std::uint64_t index) const noexcept {
    return hash_key(seed, static_cast<std::uint64_t>(s), step, index);
  }
  bool bit(Stream s, std::uint64_t site) const noexcept {
    return ((word(s, site >> 6) >> (site & 63)) & 1ULL) != 0;
  }
};

/// Sequential generator over a counter; used by samplers and initial conditions.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept : seed_(seed), stream_(stream) {}

  std::uint64_t next() noexcept { return hash_key(seed_, stream_, counter_++, 0x5bd1e995ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Child generator with its own stream; does not advance this one.
  CounterRng fork(std::uint64_t tag) const noexcept {
    return CounterRng(seed_, mix64(stream_ ^ mix64(tag + 0x51ed270b27ULL)));
  }

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace fsep
