#include <gtest/gtest.h>

#include <cmath>

#include "hopnet/hopnet.hpp"
#include "oracles.hpp"

using namespace hopnet;

namespace {

std::vector<Bits> orbit_sample(const char* family, int N, std::uint64_t seed) {
  Rng rng(seed);
  const auto base = make_family(FamilySpec::parse(family));
  std::vector<Bits> S;
  for (int i = 0; i < N; ++i) S.push_back(random_orbit_sample(base, rng).bits());
  return S;
}

std::vector<Bits> full_class(const char* family) {
  std::vector<Bits> S;
  for (const auto& g : enumerate_isomorphism_class(make_family(FamilySpec::parse(family)))) S.push_back(g.bits());
  return S;
}

}  // namespace

TEST(MarginSystem, HsvmRowsMatchDenseOracle) {
  const auto S = orbit_sample("chain:v=5,k=3", 4, 1);
  const auto sys = hsvm_system(S);
  const auto rows = oracle::dense_constraints(S);
  ASSERT_EQ(sys.constraints.size(), rows.size());
  for (const auto& c : sys.constraints) {
    std::vector<double> dense(sys.q, 0.0);
    c.axpy(1.0, dense);
    bool found = false;
    for (const auto& r : rows) {
      bool same = true;
      for (std::size_t i = 0; i < r.size() && same; ++i) same = std::abs(r[i] - dense[i]) < 1e-9;
      found = found || same;
    }
    EXPECT_TRUE(found);
  }
  EXPECT_EQ(ahsvm_system(S).constraints.size(), S.size());
}

TEST(Hsvm, MatchesNnlsOracleOnRandomSets) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto S = orbit_sample("clique:v=5,k=3", 3, seed);
    const auto r = hsvm(S);
    const auto qp = oracle::min_norm_active_set(oracle::dense_constraints(S));
    ASSERT_TRUE(qp.feasible);
    EXPECT_NEAR(r.norm_sq, qp.norm_sq, 1e-6 * qp.norm_sq) << seed;
    EXPECT_GE(r.min_margin, 1.0 - 1e-6);
    EXPECT_LE(r.max_kkt_violation, 1e-6);
    EXPECT_GE(r.duality_gap, -1e-9);
    EXPECT_NEAR(feasibility_margin(r.omega, S), r.min_margin, 1e-12);
  }
}

TEST(Hsvm, PrimalNormMatchesTheta) {
  const auto S = orbit_sample("chain:v=5,k=4", 3, 12);
  const auto r = hsvm(S);
  EXPECT_NEAR(omega_to_theta(r.omega).norm_sq(), r.norm_sq, 1e-9 * r.norm_sq);
  for (const auto& x : S) EXPECT_TRUE(is_strictly_memorized(x, omega_to_theta(r.omega), 1.0 - 1e-6));
}

TEST(Hsvm, FullOrbitSolutionIsInvariant) {
  const auto S = full_class("clique:v=5,k=3");
  const auto r = hsvm(S);
  EXPECT_LE(project_invariant(omega_to_theta(r.omega)).residual_fraction, 1e-6);
}

TEST(Ahsvm, ClosedForm) {
  const auto S = orbit_sample("clique:v=6,k=3", 5, 3);
  const auto w = ahsvm(S);
  std::vector<double> mu(omega_dim(15), 0.0);
  for (const auto& x : S) {
    const auto u = u_bar(x);
    for (std::size_t i = 0; i < mu.size(); ++i) mu[i] += u[i] / S.size();
  }
  double nn = 0.0;
  for (double m : mu) nn += m * m;
  for (std::size_t i = 0; i < mu.size(); ++i) EXPECT_NEAR(w[i], mu[i] / nn, 1e-12);
  // Single-constraint QP: min ||w|| s.t. <mu, w> >= 1.
  const auto qp = oracle::min_norm_active_set({mu});
  ASSERT_TRUE(qp.feasible);
  for (std::size_t i = 0; i < mu.size(); ++i) EXPECT_NEAR(w[i], qp.w[i], 1e-8);
}

TEST(Ahsvm, FullOrbitIsInvariant) {
  const auto w = ahsvm(full_class("cycle:v=6,k=4"));
  EXPECT_LE(project_invariant(omega_to_theta(w)).residual_fraction, 1e-10);
}

TEST(Hsvm, EmptyAndInfeasible) {
  EXPECT_THROW(hsvm(std::vector<Bits>{}), PreconditionError);
  // x and its neighbour demand opposite signs of the same gap.
  const std::vector<Bits> S{Bits{0, 0, 0}, Bits{1, 0, 0}};
  EXPECT_THROW(hsvm(S), InfeasibleError);
  EXPECT_DOUBLE_EQ(feasibility_margin(OmegaVec(3), std::vector<Bits>{}), 0.0);
}

TEST(SampleGap, DistancesShrinkOnAverage) {
  const auto base = make_family(FamilySpec::parse("clique:v=5,k=3"));
  const std::vector<int> Ns{1, 10};
  const auto recs = sample_gap_experiment(base, Ns, 3, 5);
  ASSERT_EQ(recs.size(), 6u);
  double small = 0, large = 0;
  for (const auto& r : recs) (r.N == 1 ? small : large) += r.distance;
  EXPECT_GE(small, large);
  for (const auto& r : recs) EXPECT_GE(r.distance, 0.0);
}
