#include <gtest/gtest.h>

#include <cmath>

#include "hopnet/hopnet.hpp"
#include "oracles.hpp"

using namespace hopnet;

TEST(FeatureMap, OmegaRoundTripPreservesNorm) {
  Rng rng(4);
  NetParams p(6);
  for (std::size_t i = 0; i < 6; ++i) {
    p.set_bias(i, rng.normal());
    for (std::size_t j = i + 1; j < 6; ++j) p.set_weight(i, j, rng.normal());
  }
  const auto w = theta_to_omega(p);
  EXPECT_EQ(w.size(), omega_dim(6));
  EXPECT_NEAR(w.norm_sq(), p.norm_sq(), 1e-12);
  const auto back = omega_to_theta(w);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(back.bias(i), p.bias(i), 1e-15);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(back.weight(i, j), p.weight(i, j), 1e-15);
  }
  EXPECT_THROW(OmegaVec::from_values(std::vector<double>(5)), LayoutError);
}

TEST(FeatureMap, UjInnerProductIsEnergyGap) {
  Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng.uniform_index(9);
    OmegaVec w(n);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.normal();
    const auto p = omega_to_theta(w);
    Bits x(n);
    for (auto& b : x) b = rng.uniform_index(2);
    const std::size_t j = rng.uniform_index(n);
    const double want = oracle::two_energy_gap(x, j, p);
    EXPECT_NEAR(u_j(x, j).dot(w.values()), want, 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST(FeatureMap, UjSparsityAndOrder) {
  const Bits x{1, 0, 1, 0, 1};
  const auto u = u_j(x, 1);
  EXPECT_EQ(u.nnz(), 4u);  // three active partners plus the bias
  for (std::size_t i = 1; i < u.nnz(); ++i) EXPECT_LT(u.index[i - 1], u.index[i]);
  EXPECT_DOUBLE_EQ(u.value.back(), 1.0);
}

TEST(FeatureMap, UBarIsMeanOfUj) {
  const Bits x{1, 1, 0, 1, 0, 0};
  std::vector<double> sum(omega_dim(6), 0.0);
  for (std::size_t j = 0; j < 6; ++j) u_j(x, j).axpy(1.0 / 6.0, sum);
  const auto bar = u_bar(x);
  const auto sparse = u_bar_sparse(x);
  std::vector<double> acc(omega_dim(6), 0.0);
  accumulate_u_bar(x, 2.0, acc);
  std::vector<double> from_sparse(omega_dim(6), 0.0);
  sparse.axpy(1.0, from_sparse);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    EXPECT_NEAR(bar[i], sum[i], 1e-15);
    EXPECT_NEAR(from_sparse[i], sum[i], 1e-15);
    EXPECT_NEAR(acc[i], 2 * sum[i], 1e-15);
  }
}

TEST(FeatureMap, Slots) {
  EXPECT_EQ(weight_slot(4, 0, 1), 0u);
  EXPECT_EQ(weight_slot(4, 3, 2), 5u);
  EXPECT_EQ(bias_slot(4, 0), 6u);
  SparseVec a{{0, 3}, {1.0, 2.0}}, b{{3, 4}, {5.0, 1.0}};
  EXPECT_DOUBLE_EQ(a.dot(b), 10.0);
  EXPECT_DOUBLE_EQ(a.norm_sq(), 5.0);
}
