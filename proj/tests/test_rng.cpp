#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "meek/rng.hpp"

using namespace meek;

TEST_CASE("splitmix64 reproduces the published seed-0 sequence") {
  SplitMix64 sm{0};
  CHECK(sm.next() == 0xe220a8397b1dcdafULL);
  CHECK(sm.next() == 0x6e789e6aa1b965f4ULL);
  CHECK(sm.next() == 0x06c45d188009454fULL);
  CHECK(sm.next() == 0xf88bb8a8724c81ecULL);
}

TEST_CASE("xoshiro256++ integer stream is frozen for seed 42") {
  Xoshiro256pp rng(42);
  CHECK(rng.next_u64() == 0xd0764d4f4476689fULL);
  CHECK(rng.next_u64() == 0x519e4174576f3791ULL);
  CHECK(rng.next_u64() == 0xfbe07cfb0c24ed8cULL);
  CHECK(rng.next_u64() == 0xb37d9f600cd835b8ULL);
}

TEST_CASE("uniform doubles are frozen for seed 42") {
  Xoshiro256pp rng(42);
  CHECK(rng.next_double() == 0.8143051451229099);
  CHECK(rng.next_double() == 0.3188210400616611);
  CHECK(rng.next_double() == 0.9838941681774888);
}

TEST_CASE("normal draws are frozen for seed 42") {
  Xoshiro256pp rng(42);
  CHECK(rng.next_normal() == doctest::Approx(0.9813983900724986).epsilon(1e-12));
  CHECK(rng.next_normal() == doctest::Approx(-0.565720104673956).epsilon(1e-12));
  CHECK(rng.next_normal() == doctest::Approx(1.3403256427520227).epsilon(1e-12));
}

TEST_CASE("stream seeding decorrelates runs of one simulation") {
  Xoshiro256pp s0(42, 0);
  Xoshiro256pp s1(42, 1);
  CHECK(s0.next_u64() == 0x37015387441658f3ULL);
  CHECK(s1.next_u64() == 0x344752bcafa68e8bULL);

  Xoshiro256pp a(7, 3);
  Xoshiro256pp b(7, 3);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform doubles stay in [0, 1)") {
  Xoshiro256pp rng(123);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal draws have the right first two moments") {
  Xoshiro256pp rng(99);
  const int n = 40000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.next_normal();
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("categorical sampler matches its distribution") {
  const std::vector<double> probs = {0.2, 0.3, 0.5};
  CategoricalSampler sample(probs);
  Xoshiro256pp rng(2718);
  std::vector<long long> counts(probs.size(), 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[sample(rng)];
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double freq = static_cast<double>(counts[k]) / n;
    CHECK(std::abs(freq - probs[k]) < 0.01);
  }
}

TEST_CASE("categorical sampler never draws a zero-probability category") {
  CategoricalSampler sample({0.5, 0.0, 0.5});
  Xoshiro256pp rng(31);
  for (int i = 0; i < 50000; ++i) CHECK(sample(rng) != 1);
}
