#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "hopnet/hopnet.hpp"
#include "oracles.hpp"

using namespace hopnet;

TEST(EdgeIndex, LexicographicRoundTrip) {
  for (int v = 2; v <= 12; ++v) {
    std::size_t expected = 0;
    for (int a = 0; a < v; ++a) {
      for (int b = a + 1; b < v; ++b, ++expected) {
        EXPECT_EQ(edge_index(v, a, b), expected);
        EXPECT_EQ(edge_index(v, b, a), expected);
        const auto p = edge_pair(v, expected);
        EXPECT_EQ(p.a, a);
        EXPECT_EQ(p.b, b);
      }
    }
    EXPECT_EQ(expected, edge_count(v));
    EXPECT_EQ(vertices_for_edges(edge_count(v)), v);
  }
}

TEST(EdgeIndex, RejectsBadInput) {
  EXPECT_THROW(edge_index(5, 2, 2), InvalidPairError);
  EXPECT_THROW(edge_index(5, 0, 5), InvalidPairError);
  EXPECT_THROW(edge_index(5, -1, 2), InvalidPairError);
  EXPECT_THROW(vertices_for_edges(7), LayoutError);
}

TEST(EdgeLayout, AdjacencyMatchesSharedEndpoint) {
  EdgeLayout layout(6);
  for (std::size_t i = 0; i < layout.edges(); ++i) {
    for (std::size_t j = 0; j < layout.edges(); ++j) {
      const auto p = layout.pair(i), q = layout.pair(j);
      const int shared = (p.a == q.a) + (p.a == q.b) + (p.b == q.a) + (p.b == q.b);
      EXPECT_EQ(layout.adjacent(i, j), i != j && shared == 1);
    }
  }
}

TEST(EdgeGraph, ConstructorsAgree) {
  std::vector<VertexPair> edges{{0, 1}, {1, 2}, {3, 4}};
  const auto g = EdgeGraph::from_edges(5, edges);
  EXPECT_EQ(g.sparsity(), 3u);
  EXPECT_TRUE(g.has_edge(2, 1));
  EXPECT_FALSE(g.has_edge(0, 2));
  EXPECT_EQ(EdgeGraph::from_adjacency(g.adjacency()), g);
  EXPECT_EQ(g.degrees(), (std::vector<int>{1, 2, 1, 1, 1}));
  EXPECT_EQ(g.edges(), edges);
  EXPECT_THROW(EdgeGraph(5, Bits(9, 0)), DimensionError);
}

TEST(EdgePermutation, InducedByVertexPermutationPreservesAdjacency) {
  Rng rng(1);
  for (int v = 3; v <= 8; ++v) {
    const auto perm = random_vertex_permutation(v, rng);
    const auto pi = induced_edge_permutation(perm);
    EXPECT_TRUE(pi.preserves_adjacency());
    EXPECT_EQ(pi.compose(pi.inverse()), EdgePermutation::identity(v));
    const auto g = make_family(FamilySpec::parse("chain:v=" + std::to_string(v) + ",k=3"));
    EXPECT_EQ(apply_edge_permutation(pi, g), apply_vertex_permutation(perm, g));
    EXPECT_EQ(apply_vertex_permutation(perm, g).sparsity(), g.sparsity());
  }
}

TEST(EdgePermutation, RejectsNonBijection) {
  std::vector<int> bad{0, 0, 1};
  EXPECT_THROW(validate_vertex_permutation(bad), InvalidPermutationError);
  EXPECT_THROW(EdgePermutation(3, {0, 0, 1}), InvalidPermutationError);
}

TEST(Enumeration, MatchesNaiveOrbit) {
  for (const char* fam : {"clique:v=5,k=3", "chain:v=6,k=4", "cycle:v=6,k=5", "bipartite:v=6,k=3"}) {
    const auto base = make_family(FamilySpec::parse(fam));
    const auto mine = enumerate_isomorphism_class(base);
    const auto naive = oracle::naive_orbit(base);
    ASSERT_EQ(mine.size(), naive.size()) << fam;
    for (std::size_t i = 0; i < mine.size(); ++i) EXPECT_EQ(mine[i].bits(), naive[i]) << fam;
    EXPECT_EQ(isomorphism_class_size(base), naive.size()) << fam;
  }
}

TEST(Enumeration, KnownClassSizes) {
  EXPECT_EQ(enumerate_isomorphism_class(make_family(FamilySpec::parse("bipartite:v=8,k=4"))).size(), 35u);
  EXPECT_EQ(enumerate_isomorphism_class(make_family(FamilySpec::parse("clique:v=7,k=3"))).size(), 35u);
  // Paths on 4 labelled vertices out of 7: C(7,4) * 4!/2.
  EXPECT_EQ(isomorphism_class_size(make_family(FamilySpec::parse("chain:v=7,k=4"))), 420u);
  EXPECT_THROW(enumerate_isomorphism_class(EdgeGraph(10)), CapacityError);
}

TEST(OrbitSampling, UniformOverClass) {
  const auto base = make_family(FamilySpec::parse("clique:v=6,k=3"));
  const auto cls = enumerate_isomorphism_class(base);
  std::map<Bits, long> index;
  for (const auto& g : cls) index[g.bits()] = 0;
  Rng rng(2024);
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) {
    const auto g = random_orbit_sample(base, rng);
    auto it = index.find(g.bits());
    ASSERT_NE(it, index.end());
    ++it->second;
  }
  std::vector<long> counts;
  for (const auto& [k, c] : index) counts.push_back(c);
  EXPECT_LT(oracle::chi_square_uniform(counts),
            oracle::chi_square_quantile(static_cast<int>(counts.size()) - 1, 1e-4));
}

TEST(Isomorphism, AgreesWithNaive) {
  Rng rng(9);
  for (int t = 0; t < 40; ++t) {
    Bits a(edge_count(5)), b(edge_count(5));
    for (auto& x : a) x = rng.uniform_index(2);
    for (auto& x : b) x = rng.uniform_index(2);
    const EdgeGraph ga(5, a), gb(5, b);
    EXPECT_EQ(is_isomorphic_bruteforce(ga, gb), oracle::naive_isomorphic(ga, gb));
    EXPECT_TRUE(is_isomorphic_bruteforce(ga, random_orbit_sample(ga, rng)));
  }
}

TEST(Bits, NeighborAndFlip) {
  const Bits x{0, 1, 0, 1};
  EXPECT_EQ(neighbor(x, 0), (Bits{1, 1, 0, 1}));
  const std::vector<std::size_t> pos{1, 2};
  EXPECT_EQ(flip_bits(x, pos), (Bits{0, 0, 1, 1}));
  EXPECT_THROW(neighbor(x, 4), InvalidPairError);
}

TEST(GraphText, RoundTrip) {
  const auto g = make_family(FamilySpec::parse("cycle:v=6,k=4"));
  EXPECT_EQ(parse_graph(format_graph(g)), g);
  EXPECT_EQ(parse_graph("v=4 edges=1-2,3-4"), EdgeGraph::from_edges(4, std::vector<VertexPair>{{0, 1}, {2, 3}}));
  std::vector<EdgeGraph> graphs{g, EdgeGraph(6)};
  std::stringstream ss;
  write_graphs(ss, graphs);
  EXPECT_EQ(read_graphs(ss), graphs);
  EXPECT_THROW(parse_graph("v=4 bits=0101"), DimensionError);
  EXPECT_THROW(parse_graph("v=3 bits=012"), ParseError);
  EXPECT_THROW(parse_graph("v=4 edges=1-1"), Error);
  EXPECT_THROW(parse_graph("garbage"), ParseError);
}
