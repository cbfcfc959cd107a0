#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hopnet/graph_codec.hpp"
#include "hopnet/hopfield_core.hpp"
#include "hopnet/rng.hpp"

namespace hopnet {

// beta1: weight between edges sharing a vertex, beta2: between disjoint
// edges, beta3: common bias.
struct InvariantCoords {
  double adjacent = 0.0;
  double non_adjacent = 0.0;
  double bias = 0.0;

  std::array<double, 3> as_array() const { return {adjacent, non_adjacent, bias}; }
  bool operator==(const InvariantCoords&) const = default;
};

NetParams invariant_params(const InvariantCoords& beta, int v);

struct Projection {
  InvariantCoords beta;
  double residual_norm = 0.0;
  double residual_fraction = 0.0;
  bool degenerate_non_adjacent = false;
};

Projection project_invariant(const NetParams& p);

constexpr int kMaxFullGroupVertices = 7;

// Average of the parameter orbit over all v! vertex relabelings.
NetParams symmetrize(const NetParams& p);
// Average over the given vertex permutations.
NetParams symmetrize(const NetParams& p, std::span<const std::vector<int>> perms);
NetParams symmetrize_sampled(const NetParams& p, std::size_t count, Rng& rng);

// Conjugation by a vertex relabeling: (Q theta).
NetParams permute_params(const NetParams& p, std::span<const int> vertex_perm);

NetParams construction_sparsity(std::size_t m, int v);
NetParams construction_clique(int k, int v);

struct CliqueGaps {
  double r0 = 0.0;  // edge outside the clique, no endpoint in it
  double r1 = 0.0;  // edge outside the clique, one endpoint in it
  double r2 = 0.0;  // clique edge
};

CliqueGaps clique_energy_gaps(const InvariantCoords& beta, int k);

double invariant_norm_bound(const InvariantCoords& beta, int v);
// Exact ||F(beta)||^2 from adjacency counts.
double invariant_norm_sq(const InvariantCoords& beta, int v);

// Gaps of x under F(beta), computed from per-edge neighbour counts.
std::vector<double> invariant_energy_gaps(const InvariantCoords& beta, const EdgeGraph& x);

struct OrbitCheck {
  bool holds = false;
  std::size_t class_size = 0;
  double min_gap = 0.0;
  std::optional<EdgeGraph> witness;
};

OrbitCheck orbit_memorization_check(const EdgeGraph& base, const NetParams& p, double margin);

}  // namespace hopnet
