#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace meek {

// splitmix64; used to expand seeds into generator state.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ seeded through splitmix64. Uniform doubles take the top
// 53 bits; normals use the polar method with a cached spare. All draws
// are reproducible across platforms for a given seed (no reliance on
// std::*_distribution, whose outputs vary between standard libraries).
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) { reseed(seed); }

  // Independent stream for run `stream` of a simulation seeded with
  // `seed`; used to make parallel Monte-Carlo runs reproducible.
  Xoshiro256pp(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 sm{seed};
    const std::uint64_t base = sm.next();
    reseed(base ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Marsaglia's polar method.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  void reseed(std::uint64_t seed) {
    SplitMix64 sm{seed};
    for (auto& s : s_) s = sm.next();
    have_spare_ = false;
  }

  std::uint64_t s_[4]{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Inverse-CDF categorical sampler. Binary search over the cumulative
// table keeps index draws deterministic for a given generator sequence.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const std::vector<double>& probabilities) {
    cdf_.reserve(probabilities.size());
    double acc = 0.0;
    for (double p : probabilities) {
      acc += p;
      cdf_.push_back(acc);
    }
    if (!cdf_.empty()) cdf_.back() = 1.0;
  }

  std::size_t operator()(Xoshiro256pp& rng) const {
    const double u = rng.next_double();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::size_t>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace meek
