#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dynsis {

/// SplitMix64 finaliser; used to derive independent seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for substream `stream` of `master`; distinct tags keep graph
/// generation and event streams of the same run apart.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t tag = 0) noexcept {
  return splitmix64(splitmix64(master ^ splitmix64(tag)) + stream);
}

/// Project-wide generator: std::mt19937_64 with hand-written variate
/// transforms, since the std distributions are implementation-defined and
/// would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n must be positive. Lemire's method.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x = engine_();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = engine_();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dynsis
