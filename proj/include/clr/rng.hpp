#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace clr {

// All randomness in the project flows through this generator. It is the
// SplitMix64 sequence (Steele, Lea & Flood 2014): a 64-bit counter advanced by
// the golden-ratio increment and passed through a fixed avalanche finalizer.
// Pure integer arithmetic, so streams are bit-identical across platforms and
// compilers. The exact constants are part of the on-disk reproducibility
// contract and must not change.
inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t avalanche64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Combines a seed with one derivation key. Folding left over several keys
// gives the per-sentence / per-view / per-step seeds used everywhere;
// worker scheduling can therefore never change a sampled value.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) {
  return avalanche64(avalanche64(seed) ^ (key + kGoldenGamma));
}

template <typename... Keys>
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key, Keys... rest) {
  return mix_seed(mix_seed(seed, key), rest...);
}

// Derivation streams. Separates independent uses of the same run seed.
namespace stream {
inline constexpr std::uint64_t kAugment = 0xA1;
inline constexpr std::uint64_t kMlmMask = 0xA2;
inline constexpr std::uint64_t kEpochOrder = 0xA3;
inline constexpr std::uint64_t kDropout = 0xA4;
inline constexpr std::uint64_t kParamInit = 0xA5;
}  // namespace stream

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kGoldenGamma;
    return avalanche64(state_);
  }

  // Uniform in [0, n), unbiased via modulo rejection. n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller. Consumes two draws per pair.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from [0, n), returned sorted ascending.
  std::vector<std::int32_t> sample_distinct(std::int32_t k, std::int32_t n) {
    std::vector<std::int32_t> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    if (k > n) k = n;
    // Partial Fisher-Yates: after i swaps the first i entries are the sample.
    for (std::int32_t i = 0; i < k; ++i) {
      const auto j = i + static_cast<std::int32_t>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace clr
