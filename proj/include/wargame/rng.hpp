#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace wargame {

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 output function applied to an already-advanced state.
constexpr std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Top 53 bits scaled into [0, 1).
constexpr double bits_to_uniform(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// One mixing round: the first SplitMix64 output for `seed`.
constexpr std::uint64_t mix_seed(std::uint64_t seed) { return splitmix_finalize(seed + kSplitMixGamma); }

// Combines two values into a well-spread seed (for deriving sub-streams).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix_seed(seed ^ mix_seed(stream + 0x632BE59BD9B4E019ULL));
}

class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

  constexpr std::uint64_t next() {
    state_ += kSplitMixGamma;
    return splitmix_finalize(state_);
  }

  constexpr double uniform() { return bits_to_uniform(next()); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    // Lemire's multiply-shift with rejection.
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  int below_int(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller (one value per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// Pure form of one draw: returns (uniform, advanced state).
constexpr std::pair<double, std::uint64_t> draw_uniform(std::uint64_t state) {
  SplitMix64 g(state);
  const double u = g.uniform();
  return {u, g.state()};
}

}  // namespace wargame
