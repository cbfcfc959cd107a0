#include <gtest/gtest.h>

#include <cmath>

#include "hopnet/hopnet.hpp"
#include "oracles.hpp"

using namespace hopnet;

namespace {

NetParams random_params(std::size_t n, Rng& rng) {
  NetParams p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.set_bias(i, rng.normal());
    for (std::size_t j = i + 1; j < n; ++j) p.set_weight(i, j, rng.normal());
  }
  return p;
}

double max_abs_diff(const NetParams& a, const NetParams& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.weights().size(); ++i) d = std::max(d, std::abs(a.weights()[i] - b.weights()[i]));
  for (std::size_t i = 0; i < a.biases().size(); ++i) d = std::max(d, std::abs(a.biases()[i] - b.biases()[i]));
  return d;
}

}  // namespace

TEST(Invariant, ParamsAreFixedByEveryRelabeling) {
  const auto p = invariant_params({0.3, -1.2, 0.7}, 6);
  Rng rng(1);
  for (int t = 0; t < 20; ++t) EXPECT_EQ(permute_params(p, random_vertex_permutation(6, rng)), p);
  const auto proj = project_invariant(p);
  EXPECT_NEAR(proj.beta.adjacent, 0.3, 1e-15);
  EXPECT_NEAR(proj.beta.non_adjacent, -1.2, 1e-15);
  EXPECT_NEAR(proj.beta.bias, 0.7, 1e-15);
  EXPECT_LE(proj.residual_fraction, 1e-15);
}

TEST(Invariant, ProjectionEqualsFullSymmetrization) {
  Rng rng(2);
  const auto p = random_params(edge_count(5), rng);
  const auto sym = symmetrize(p);
  const auto proj = project_invariant(p);
  EXPECT_LE(max_abs_diff(sym, invariant_params(proj.beta, 5)), 1e-12);
  EXPECT_NEAR(proj.residual_norm, std::sqrt((p - sym).norm_sq()), 1e-10);
  EXPECT_NEAR(proj.residual_fraction, proj.residual_norm / std::sqrt(p.norm_sq()), 1e-15);
}

TEST(Invariant, SampledSymmetrizationApproachesProjection) {
  Rng rng(3);
  const auto p = random_params(edge_count(6), rng);
  const auto exact = invariant_params(project_invariant(p).beta, 6);
  const auto approx = symmetrize_sampled(p, 20000, rng);
  EXPECT_LE(max_abs_diff(exact, approx), 0.05);
  EXPECT_THROW(symmetrize(random_params(edge_count(8), rng)), CapacityError);
}

TEST(Invariant, DegenerateNonAdjacentAtThreeVertices) {
  const auto proj = project_invariant(invariant_params({1.0, 0.0, 2.0}, 3));
  EXPECT_TRUE(proj.degenerate_non_adjacent);
  EXPECT_EQ(proj.beta.non_adjacent, 0.0);
  EXPECT_FALSE(project_invariant(NetParams(6)).degenerate_non_adjacent);
  EXPECT_EQ(project_invariant(NetParams(6)).residual_fraction, 0.0);
}

TEST(Invariant, GapsFromCountsMatchDirectGaps) {
  Rng rng(4);
  for (int t = 0; t < 60; ++t) {
    const int v = 3 + static_cast<int>(rng.uniform_index(6));
    const InvariantCoords beta{rng.normal(), rng.normal(), rng.normal()};
    const auto p = invariant_params(beta, v);
    Bits x(edge_count(v));
    for (auto& b : x) b = rng.uniform_index(2);
    const auto gaps = invariant_energy_gaps(beta, EdgeGraph(v, x));
    for (std::size_t j = 0; j < x.size(); ++j) {
      EXPECT_NEAR(gaps[j], oracle::two_energy_gap(x, j, p), 1e-10);
    }
  }
}

TEST(Invariant, ExactNormAndBound) {
  Rng rng(5);
  for (int v = 3; v <= 12; ++v) {
    const InvariantCoords beta{rng.normal(), rng.normal(), rng.normal()};
    const double exact = invariant_params(beta, v).norm_sq();
    EXPECT_NEAR(invariant_norm_sq(beta, v), exact, 1e-9 * exact);
    EXPECT_LE(exact, invariant_norm_bound(beta, v) * (1 + 1e-12));
  }
  // Sparsity construction: every off-diagonal entry is 2 and every bias 1 - 2m.
  const int v = 8;
  const double n = edge_count(v);
  const std::size_t m = 16;
  EXPECT_NEAR(construction_sparsity(m, v).norm_sq(), 4 * n * (n - 1) + n * std::pow(1.0 - 2.0 * m, 2), 1e-6);
}

TEST(Constructions, SparsityMemorizesEveryMEdgeGraph) {
  for (const char* fam : {"bipartite:v=8,k=4", "chain:v=7,k=4", "clique:v=6,k=3"}) {
    const auto base = make_family(FamilySpec::parse(fam));
    const auto p = construction_sparsity(base.sparsity(), base.vertices());
    const auto check = orbit_memorization_check(base, p, 1.0 - 1e-12);
    EXPECT_TRUE(check.holds) << fam;
    EXPECT_NEAR(check.min_gap, 1.0, 1e-9) << fam;
    // One extra edge breaks the margin.
    auto bits = base.bits();
    for (auto& b : bits) {
      if (!b) {
        b = 1;
        break;
      }
    }
    EXPECT_LT(min_energy_gap(bits, p), 1.0) << fam;
  }
}

TEST(Constructions, CliqueGapsMatchDirectComputation) {
  for (int k = 5; k <= 12; ++k) {
    const int v = k + 3;
    const double kd = k;
    const InvariantCoords beta{-5.0 / kd, 14.0 / (kd * kd), 0.0};
    const auto p = construction_clique(k, v);
    const auto x = make_family(FamilySpec::parse("clique:v=" + std::to_string(v) + ",k=" + std::to_string(k)));
    const auto g = clique_energy_gaps(beta, k);
    const EdgeLayout layout(v);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto e = layout.pair(j);
      const int inside = (e.a < k) + (e.b < k);
      const double want = inside == 2 ? g.r2 : inside == 1 ? g.r1 : g.r0;
      EXPECT_NEAR(oracle::two_energy_gap(x.bits(), j, p), want, 1e-10) << k << " " << j;
    }
  }
}

TEST(Constructions, CliqueConstructionMissesMarginBelowSixteen) {
  // The one-endpoint gap is (k-1)(2k-14)/k^2, which only reaches 1 at k >= 16.
  for (int k : {5, 8, 12, 15}) {
    const double kd = k;
    const auto g = clique_energy_gaps({-5.0 / kd, 14.0 / (kd * kd), 0.0}, k);
    EXPECT_NEAR(g.r1, (kd - 1) * (2 * kd - 14) / (kd * kd), 1e-12);
    EXPECT_LT(g.r1, 1.0);
  }
  const auto g16 = clique_energy_gaps({-5.0 / 16, 14.0 / 256, 0.0}, 16);
  EXPECT_GE(g16.r1, 1.0);
  EXPECT_THROW(construction_clique(4, 8), PreconditionError);
}

TEST(OrbitCheck, RequiresInvariantParams) {
  Rng rng(6);
  const auto base = make_family(FamilySpec::parse("clique:v=5,k=3"));
  EXPECT_THROW(orbit_memorization_check(base, random_params(10, rng), 1.0), PreconditionError);
  const auto bad = orbit_memorization_check(base, NetParams(10), 0.0);
  EXPECT_FALSE(bad.holds);
  ASSERT_TRUE(bad.witness.has_value());
  EXPECT_EQ(bad.class_size, 10u);
}
