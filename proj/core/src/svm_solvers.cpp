#include "hopnet/svm_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "hopnet/error.hpp"
#include "hopnet/hopfield_core.hpp"
#include "hopnet/rng.hpp"

namespace hopnet {

namespace {

bool sparse_less(const SparseVec& a, const SparseVec& b) {
  if (a.index != b.index) return a.index < b.index;
  return a.value < b.value;
}

std::size_t check_common_length(std::span<const Bits> S) {
  if (S.empty()) throw PreconditionError("margin system needs a nonempty set");
  const std::size_t n = S.front().size();
  for (const auto& x : S) {
    if (x.size() != n) throw DimensionError("states in the set differ in length");
  }
  return n;
}

}  // namespace

MarginSystem hsvm_system(std::span<const Bits> S) {
  const std::size_t n = check_common_length(S);
  MarginSystem sys;
  sys.n = n;
  sys.q = omega_dim(n);
  sys.constraints.reserve(S.size() * n);
  for (const auto& x : S) {
    for (std::size_t j = 0; j < n; ++j) sys.constraints.push_back(u_j(x, j));
  }
  std::sort(sys.constraints.begin(), sys.constraints.end(), sparse_less);
  sys.constraints.erase(std::unique(sys.constraints.begin(), sys.constraints.end()), sys.constraints.end());
  return sys;
}

MarginSystem ahsvm_system(std::span<const Bits> S) {
  const std::size_t n = check_common_length(S);
  MarginSystem sys;
  sys.n = n;
  sys.q = omega_dim(n);
  for (const auto& x : S) sys.constraints.push_back(u_bar_sparse(x));
  return sys;
}

HsvmResult solve_min_norm(const MarginSystem& system, const SvmOptions& options) {
  const std::size_t m = system.constraints.size();
  if (m == 0) throw PreconditionError("margin system has no constraints");
  if (options.tol <= 0.0) throw PreconditionError("tolerance must be positive");
  std::vector<double> w(system.q, 0.0);
  std::vector<double> alpha(m, 0.0);
  std::vector<double> diag(m);
  for (std::size_t c = 0; c < m; ++c) {
    diag[c] = system.constraints[c].norm_sq();
    if (!(diag[c] > 0.0) || !std::isfinite(diag[c])) {
      throw InfeasibleError("constraint " + std::to_string(c) + " has a zero or non-finite feature vector");
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(options.seed, "hsvm-order", {m}));

  constexpr double kBlowUp = 1e12;
  auto kkt_violation = [&](std::size_t c, double g) { return alpha[c] > 0.0 ? std::abs(g) : std::max(0.0, -g); };

  HsvmResult result;
  long sweep = 0;
  for (;;) {
    if (sweep >= options.max_sweeps) {
      throw InfeasibleError("no margin-1 point found within " + std::to_string(options.max_sweeps) +
                            " sweeps");
    }
    ++sweep;
    for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
    double worst = 0.0;
    for (std::size_t c : order) {
      const SparseVec& u = system.constraints[c];
      const double g = u.dot(w) - 1.0;
      worst = std::max(worst, kkt_violation(c, g));
      const double next = std::max(0.0, alpha[c] - g / diag[c]);
      if (next != alpha[c]) {
        u.axpy(next - alpha[c], w);
        alpha[c] = next;
      }
    }
    const double total = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    if (!std::isfinite(total) || total > kBlowUp) {
      throw InfeasibleError("dual variables diverge; the margin system is infeasible");
    }
    if (worst > options.tol) continue;

    // Rebuild w from alpha to remove accumulated drift, then re-check.
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t c = 0; c < m; ++c) {
      if (alpha[c] > 0.0) system.constraints[c].axpy(alpha[c], w);
    }
    double recheck = 0.0;
    double min_margin = std::numeric_limits<double>::infinity();
    double gap = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      const double margin = system.constraints[c].dot(w);
      min_margin = std::min(min_margin, margin);
      recheck = std::max(recheck, kkt_violation(c, margin - 1.0));
      gap += alpha[c] * (margin - 1.0);
    }
    if (recheck > options.tol) continue;

    result.omega = OmegaVec::from_values(std::move(w));
    result.alpha = std::move(alpha);
    result.norm_sq = result.omega.norm_sq();
    result.min_margin = min_margin;
    result.duality_gap = std::abs(gap);
    result.max_kkt_violation = recheck;
    result.n_constraints = m;
    result.sweeps = sweep;
    return result;
  }
}

HsvmResult hsvm(std::span<const Bits> S, const SvmOptions& options) {
  return solve_min_norm(hsvm_system(S), options);
}

OmegaVec ahsvm(std::span<const Bits> S) {
  const std::size_t n = check_common_length(S);
  // Grouping duplicates makes the mean depend only on the empirical distribution.
  std::map<Bits, std::size_t> counts;
  for (const auto& x : S) ++counts[x];
  std::vector<double> mu(omega_dim(n), 0.0);
  const double total = static_cast<double>(S.size());
  for (const auto& [x, count] : counts) accumulate_u_bar(x, static_cast<double>(count) / total, mu);
  double norm_sq = 0.0;
  for (double v : mu) norm_sq += v * v;
  if (norm_sq == 0.0) throw InfeasibleError("infeasible-average: mean feature vector is zero");
  for (double& v : mu) v /= norm_sq;
  return OmegaVec::from_values(std::move(mu));
}

double feasibility_margin(const OmegaVec& w, std::span<const Bits> S) {
  if (S.empty()) return 0.0;
  const NetParams p = omega_to_theta(w);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : S) best = std::min(best, min_energy_gap(x, p));
  return best;
}

std::vector<SampleGapRecord> sample_gap_experiment(const EdgeGraph& base, std::span<const int> Ns, int trials,
                                                   std::uint64_t seed) {
  if (base.vertices() > 8) throw CapacityError("sample gap experiment needs an enumerable class (v <= 8)");
  const auto cls = enumerate_isomorphism_class(base);
  std::vector<Bits> orbit;
  orbit.reserve(cls.size());
  for (const auto& g : cls) orbit.push_back(g.bits());
  const OmegaVec target = ahsvm(orbit);
  std::vector<SampleGapRecord> out;
  for (int N : Ns) {
    if (N < 1) throw PreconditionError("sample sizes must be positive");
    for (int t = 0; t < trials; ++t) {
      Rng rng(derive_seed(seed, "sample-gap", {static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(t)}));
      std::vector<Bits> sample;
      sample.reserve(N);
      for (int i = 0; i < N; ++i) sample.push_back(random_orbit_sample(base, rng).bits());
      const OmegaVec w = ahsvm(sample);
      double d = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) d += (w[i] - target[i]) * (w[i] - target[i]);
      out.push_back({N, t, std::sqrt(d)});
    }
  }
  return out;
}

}  // namespace hopnet
