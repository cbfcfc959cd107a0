#include "hopnet/invariant_subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hopnet/error.hpp"

namespace hopnet {

namespace {

// Neumaier-compensated running sums, one per slot.
class CompensatedSum {
 public:
  explicit CompensatedSum(std::size_t size) : sum_(size, 0.0), comp_(size, 0.0) {}

  void add(std::size_t i, double x) {
    const double t = sum_[i] + x;
    if (std::abs(sum_[i]) >= std::abs(x)) {
      comp_[i] += (sum_[i] - t) + x;
    } else {
      comp_[i] += (x - t) + sum_[i];
    }
    sum_[i] = t;
  }

  double value(std::size_t i) const { return sum_[i] + comp_[i]; }

 private:
  std::vector<double> sum_;
  std::vector<double> comp_;
};

NetParams average_over(const NetParams& p, const std::vector<std::vector<int>>& perms) {
  const std::size_t n = p.n();
  CompensatedSum w(n * n);
  CompensatedSum b(n);
  for (const auto& perm : perms) {
    const auto pi = induced_edge_permutation(perm);
    for (std::size_t i = 0; i < n; ++i) {
      b.add(pi(i), p.bias(i));
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::size_t a = pi(i), c = pi(j);
        w.add(std::min(a, c) * n + std::max(a, c), p.weight(i, j));
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(perms.size());
  NetParams out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.set_bias(i, b.value(i) * inv);
    for (std::size_t j = i + 1; j < n; ++j) out.set_weight(i, j, w.value(i * n + j) * inv);
  }
  return out;
}

int vertices_of(const NetParams& p) { return vertices_for_edges(p.n()); }

}  // namespace

NetParams invariant_params(const InvariantCoords& beta, int v) {
  if (v < 3) throw PreconditionError("invariant parameters need v >= 3, got v=" + std::to_string(v));
  const EdgeLayout layout(v);
  const std::size_t n = layout.edges();
  NetParams p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.set_bias(i, beta.bias);
    for (std::size_t j = i + 1; j < n; ++j) {
      p.set_weight(i, j, layout.adjacent(i, j) ? beta.adjacent : beta.non_adjacent);
    }
  }
  return p;
}

Projection project_invariant(const NetParams& p) {
  const int v = vertices_of(p);
  const std::size_t n = p.n();
  const EdgeLayout layout(v);
  double sum_adj = 0.0, sum_non = 0.0, sum_b = 0.0;
  std::size_t cnt_adj = 0, cnt_non = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_b += p.bias(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (layout.adjacent(i, j)) {
        sum_adj += p.weight(i, j);
        ++cnt_adj;
      } else {
        sum_non += p.weight(i, j);
        ++cnt_non;
      }
    }
  }
  Projection out;
  out.beta.adjacent = cnt_adj ? sum_adj / static_cast<double>(cnt_adj) : 0.0;
  out.beta.non_adjacent = cnt_non ? sum_non / static_cast<double>(cnt_non) : 0.0;
  out.beta.bias = n ? sum_b / static_cast<double>(n) : 0.0;
  out.degenerate_non_adjacent = cnt_non == 0;

  double resid = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double db = p.bias(i) - out.beta.bias;
    resid += db * db;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double target = layout.adjacent(i, j) ? out.beta.adjacent : out.beta.non_adjacent;
      const double dw = p.weight(i, j) - target;
      resid += 2.0 * dw * dw;
    }
  }
  out.residual_norm = std::sqrt(resid);
  const double norm = std::sqrt(p.norm_sq());
  out.residual_fraction = norm > 0.0 ? out.residual_norm / norm : 0.0;
  return out;
}

NetParams permute_params(const NetParams& p, std::span<const int> vertex_perm) {
  const int v = vertices_of(p);
  if (static_cast<int>(vertex_perm.size()) != v) throw DimensionError("vertex permutation size mismatch");
  const auto pi = induced_edge_permutation(vertex_perm);
  const std::size_t n = p.n();
  NetParams out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.set_bias(pi(i), p.bias(i));
    for (std::size_t j = i + 1; j < n; ++j) out.set_weight(pi(i), pi(j), p.weight(i, j));
  }
  return out;
}

NetParams symmetrize(const NetParams& p) {
  const int v = vertices_of(p);
  if (v > kMaxFullGroupVertices) {
    throw CapacityError("full-group symmetrization needs v <= " + std::to_string(kMaxFullGroupVertices) +
                        ", got v=" + std::to_string(v) + "; use a sampled permutation set");
  }
  std::vector<std::vector<int>> perms;
  std::vector<int> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return average_over(p, perms);
}

NetParams symmetrize(const NetParams& p, std::span<const std::vector<int>> perms) {
  const int v = vertices_of(p);
  if (perms.empty()) throw PreconditionError("symmetrization needs at least one permutation");
  std::vector<std::vector<int>> copy(perms.begin(), perms.end());
  for (const auto& perm : copy) {
    if (static_cast<int>(perm.size()) != v) throw DimensionError("vertex permutation size mismatch");
  }
  return average_over(p, copy);
}

NetParams symmetrize_sampled(const NetParams& p, std::size_t count, Rng& rng) {
  const int v = vertices_of(p);
  std::vector<std::vector<int>> perms;
  perms.reserve(count);
  for (std::size_t i = 0; i < count; ++i) perms.push_back(random_vertex_permutation(v, rng));
  return symmetrize(p, perms);
}

NetParams construction_sparsity(std::size_t m, int v) {
  if (m > edge_count(v)) {
    throw PreconditionError("sparsity " + std::to_string(m) + " exceeds n=" + std::to_string(edge_count(v)));
  }
  return invariant_params({2.0, 2.0, 1.0 - 2.0 * static_cast<double>(m)}, v);
}

NetParams construction_clique(int k, int v) {
  if (k < 5) throw PreconditionError("clique construction requires k >= 5, got k=" + std::to_string(k));
  if (k > v) throw PreconditionError("clique size exceeds the vertex count");
  const double kd = static_cast<double>(k);
  return invariant_params({-5.0 / kd, 14.0 / (kd * kd), 0.0}, v);
}

CliqueGaps clique_energy_gaps(const InvariantCoords& beta, int k) {
  if (k < 2) throw PreconditionError("clique gaps need k >= 2");
  const double kd = static_cast<double>(k);
  const double m = kd * (kd - 1.0) / 2.0;
  CliqueGaps g;
  g.r0 = beta.non_adjacent * m + beta.bias;
  g.r1 = beta.adjacent * (kd - 1.0) + beta.non_adjacent * (m - kd + 1.0) + beta.bias;
  g.r2 = -(2.0 * beta.adjacent * (kd - 2.0) + beta.non_adjacent * (kd - 2.0) * (kd - 3.0) / 2.0 + beta.bias);
  return g;
}

double invariant_norm_bound(const InvariantCoords& beta, int v) {
  const double vd = static_cast<double>(v);
  return beta.non_adjacent * beta.non_adjacent * vd * vd * vd * vd +
         2.0 * beta.adjacent * beta.adjacent * vd * vd * vd + beta.bias * beta.bias * vd * vd;
}

double invariant_norm_sq(const InvariantCoords& beta, int v) {
  const double vd = static_cast<double>(v);
  const double n = vd * (vd - 1.0) / 2.0;
  const double adj = 2.0 * (vd - 2.0);
  const double non = (vd - 2.0) * (vd - 3.0) / 2.0;
  return n * (adj * beta.adjacent * beta.adjacent + non * beta.non_adjacent * beta.non_adjacent +
              beta.bias * beta.bias);
}

std::vector<double> invariant_energy_gaps(const InvariantCoords& beta, const EdgeGraph& x) {
  const int v = x.vertices();
  const auto deg = x.degrees();
  const auto m = static_cast<long>(x.sparsity());
  std::vector<double> gaps(x.size());
  std::size_t j = 0;
  for (int a = 0; a < v; ++a) {
    for (int b = a + 1; b < v; ++b, ++j) {
      const long self = x.bits()[j];
      const long adj = deg[a] + deg[b] - 2 * self;
      const long non = m - self - adj;
      const double field = beta.adjacent * static_cast<double>(adj) +
                           beta.non_adjacent * static_cast<double>(non) + beta.bias;
      gaps[j] = self ? -field : field;
    }
  }
  return gaps;
}

OrbitCheck orbit_memorization_check(const EdgeGraph& base, const NetParams& p, double margin) {
  if (p.n() != base.size()) throw DimensionError("parameters do not match the graph size");
  if (project_invariant(p).residual_fraction > 1e-10) {
    throw PreconditionError("orbit check needs parameters in the invariant subspace");
  }
  OrbitCheck out;
  out.holds = true;
  out.min_gap = std::numeric_limits<double>::infinity();
  const auto cls = enumerate_isomorphism_class(base);
  out.class_size = cls.size();
  for (const auto& g : cls) {
    const double gap = min_energy_gap(g.bits(), p);
    out.min_gap = std::min(out.min_gap, gap);
    const bool ok = margin == 0.0 ? gap > 0.0 : gap >= margin;
    if (!ok && out.holds) {
      out.holds = false;
      out.witness = g;
    }
  }
  return out;
}

}  // namespace hopnet
