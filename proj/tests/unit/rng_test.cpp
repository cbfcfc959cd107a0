#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "hopnet/rng.hpp"
#include "oracles.hpp"

using hopnet::Rng;

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformIndexStaysInRange) {
  Rng rng(7);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 35ULL, 1000003ULL}) {
    for (int i = 0; i < 2000; ++i) EXPECT_LT(rng.uniform_index(bound), bound);
  }
}

TEST(Rng, UniformIndexIsUniform) {
  Rng rng(11);
  std::vector<long> counts(10, 0);
  for (int i = 0; i < 100000; ++i) ++counts[rng.uniform_index(10)];
  EXPECT_LT(oracle::chi_square_uniform(counts), oracle::chi_square_quantile(9, 1e-4));
}

TEST(Rng, Uniform01AndNormalMoments) {
  Rng rng(3);
  double s = 0, s2 = 0;
  const int count = 200000;
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / count, 0.0, 0.02);
  EXPECT_NEAR(s2 / count, 1.0, 0.02);
}

TEST(Rng, DeriveSeedSeparatesLabelsAndKeys) {
  std::set<std::uint64_t> seeds;
  for (const char* label : {"train", "test"}) {
    for (std::uint64_t a = 0; a < 10; ++a) {
      for (std::uint64_t b = 0; b < 10; ++b) seeds.insert(hopnet::derive_seed(1, label, {a, b}));
    }
  }
  EXPECT_EQ(seeds.size(), 200u);
  EXPECT_EQ(hopnet::derive_seed(5, "x", {1, 2}), hopnet::derive_seed(5, "x", {1, 2}));
  EXPECT_NE(hopnet::derive_seed(5, "x", {1, 2}), hopnet::derive_seed(5, "x", {2, 1}));
  EXPECT_NE(hopnet::derive_seed(5, "x", {1}), hopnet::derive_seed(6, "x", {1}));
}
