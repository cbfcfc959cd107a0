#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hopnet/feature_map.hpp"
#include "hopnet/graph_codec.hpp"

namespace hopnet {

struct MarginSystem {
  std::size_t n = 0;
  std::size_t q = 0;
  std::vector<SparseVec> constraints;
};

// One constraint per (sample, j), duplicates removed.
MarginSystem hsvm_system(std::span<const Bits> S);
// One averaged constraint per sample.
MarginSystem ahsvm_system(std::span<const Bits> S);

struct SvmOptions {
  double tol = 1e-6;
  std::uint64_t seed = 0;
  long max_sweeps = 200000;
};

struct HsvmResult {
  OmegaVec omega;
  std::vector<double> alpha;  // dual variables, aligned with the system's constraints
  double norm_sq = 0.0;
  double min_margin = 0.0;
  double duality_gap = 0.0;
  double max_kkt_violation = 0.0;
  std::size_t n_constraints = 0;
  long sweeps = 0;
};

// min ||w||^2 / 2 subject to <u_c, w> >= 1 by dual coordinate ascent.
HsvmResult solve_min_norm(const MarginSystem& system, const SvmOptions& options = {});
HsvmResult hsvm(std::span<const Bits> S, const SvmOptions& options = {});

// mu_S / ||mu_S||^2 with mu_S the mean of u_bar over S.
OmegaVec ahsvm(std::span<const Bits> S);

// min over samples and j of <u_j(x), w>; 0 for empty S.
double feasibility_margin(const OmegaVec& w, std::span<const Bits> S);

struct SampleGapRecord {
  int N = 0;
  int trial = 0;
  double distance = 0.0;
};

std::vector<SampleGapRecord> sample_gap_experiment(const EdgeGraph& base, std::span<const int> Ns,
                                                   int trials, std::uint64_t seed);

}  // namespace hopnet
