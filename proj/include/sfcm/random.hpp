#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace sfcm {

/// Portable seeded generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; the derived draws below avoid the
/// implementation-defined standard distributions:
///
///   uniform01()      = (next() >> 11) * 2^-53            in [0, 1)
///   below(n)         = next() % n, rejecting next() >= 2^64 - (2^64 % n)
///   uniform(lo, hi)  = lo + below(hi - lo + 1)
///   shuffle(v)       = Fisher-Yates from the back, j = below(i + 1)
///
/// Streams for individual agents are seeded with split(seed, stream).
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    for (;;) {
      const std::uint64_t x = next();
      if (x <= limit) return x % n;
    }
  }

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo);
    if (span == ~std::uint64_t{0}) return static_cast<std::int64_t>(next());
    return lo + static_cast<std::int64_t>(below(span + 1));
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

  /// SplitMix64 finalizer over (seed, stream); gives independent,
  /// order-insensitive per-agent seeds.
  static std::uint64_t split(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace sfcm
