#pragma once

// Deterministic, splittable random streams. Every stream is addressed by
// (master_seed, experiment_tag, sample_index, role, substream) and can be
// re-derived at any time without sequential replay, so the environment and
// the coloring of one sample are independently reproducible and workers may
// process samples in any order.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace perc {

// Default master seed; never wall-clock time.
inline constexpr std::uint64_t kDefaultMasterSeed = 1729;

// Poisson counts are drawn by sequential-search inversion below this mean and
// by transformed rejection above it. The threshold is part of the
// reproducibility contract: changing it changes every sampled environment.
inline constexpr double kPoissonInversionThreshold = 16.0;

namespace detail {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

// Philox 4x32-10 block function (Salmon et al., SC 2011).
inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> philox_block(std::array<std::uint32_t, 4> ctr,
                                                 std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

}  // namespace detail

struct SeedSpec {
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::string experiment_tag;
};

enum class StreamRole : std::uint32_t { environment = 1, color = 2, auxiliary = 3 };

// A stateful uniform stream backed by Philox: the 64-bit stream key selects
// the stream, a 64-bit block counter walks along it.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t stream_key)
      : key_{static_cast<std::uint32_t>(stream_key),
             static_cast<std::uint32_t>(stream_key >> 32)} {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    std::uint64_t lo = next_u32();
    std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform double in [0,1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Exact Poisson draw; see kPoissonInversionThreshold.
  std::uint64_t poisson(double mean) {
    if (!(mean > 0.0)) return 0;
    if (mean < kPoissonInversionThreshold) return poisson_inversion(mean);
    return poisson_rejection(mean);
  }

 private:
  void refill() {
    buf_ = detail::philox_block({static_cast<std::uint32_t>(block_),
                                 static_cast<std::uint32_t>(block_ >> 32), 0u, 0u},
                                key_);
    ++block_;
    pos_ = 0;
  }

  std::uint64_t poisson_inversion(double mean) {
    double u = next_unit();
    double pmf = std::exp(-mean);
    double cdf = pmf;
    std::uint64_t k = 0;
    while (u > cdf && k < 2000) {
      ++k;
      pmf *= mean / static_cast<double>(k);
      cdf += pmf;
    }
    return k;
  }

  // Rejection from a Lorentzian envelope (Numerical Recipes "poidev").
  std::uint64_t poisson_rejection(double mean) {
    const double sq = std::sqrt(2.0 * mean);
    const double alxm = std::log(mean);
    const double g = mean * alxm - std::lgamma(mean + 1.0);
    for (;;) {
      double y, em;
      do {
        y = std::tan(3.141592653589793 * next_unit());
        em = sq * y + mean;
      } while (em < 0.0 || !(em < 9e18));
      em = std::floor(em);
      double t = 0.9 * (1.0 + y * y) * std::exp(em * alxm - std::lgamma(em + 1.0) - g);
      if (next_unit() <= t) return static_cast<std::uint64_t>(em);
    }
  }

  std::array<std::uint32_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

// Pure derivation: identical inputs give identical streams within a release.
inline RandomStream derive_stream(const SeedSpec& seed, std::uint64_t sample_index,
                                  StreamRole role, std::uint64_t substream = 0) {
  std::uint64_t h = detail::splitmix64_mix(seed.master_seed);
  h = detail::splitmix64_mix(h ^ detail::fnv1a64(seed.experiment_tag));
  h = detail::splitmix64_mix(h ^ sample_index);
  h = detail::splitmix64_mix(h ^ (static_cast<std::uint64_t>(role) << 56) ^ substream);
  return RandomStream(h);
}

}  // namespace perc
