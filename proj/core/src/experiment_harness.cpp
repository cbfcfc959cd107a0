#include "hopnet/experiment_harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <string>

#include "hopnet/error.hpp"
#include "hopnet/rng.hpp"
#include "hopnet/worker_pool.hpp"

namespace hopnet {

namespace {

std::uint64_t u64(long long x) { return static_cast<std::uint64_t>(x); }

std::vector<Bits> sample_orbit(const EdgeGraph& base, int count, Rng& rng) {
  std::vector<Bits> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(random_orbit_sample(base, rng).bits());
  return out;
}

double hamming_fraction(const Bits& a, const Bits& b) {
  std::size_t diff = 0;
  for (std::size_t j = 0; j < a.size(); ++j) diff += a[j] != b[j];
  return a.empty() ? 0.0 : static_cast<double>(diff) / static_cast<double>(a.size());
}

Bits settle(const Bits& x, const NetParams& p) {
  try {
    return run_dynamics(x, p).fixed_point;
  } catch (const BudgetExhaustedError& e) {
    return e.last_state();
  }
}

}  // namespace

AccuracyResult accuracy(const NetParams& p, std::span<const Bits> test, double strict_margin) {
  if (test.empty()) throw PreconditionError("accuracy needs a nonempty test set");
  AccuracyResult acc;
  for (const auto& x : test) {
    const auto h = local_fields(x, p);
    bool fixed = true;
    bool strict = true;
    for (std::size_t j = 0; j < h.size(); ++j) {
      fixed = fixed && (h[j] < 0.0 ? 1 : 0) == x[j];
      const double gap = x[j] ? -h[j] : h[j];
      strict = strict && (strict_margin == 0.0 ? gap > 0.0 : gap >= strict_margin);
    }
    acc.exact += fixed;
    acc.strict += strict;
    acc.bits += fixed ? 1.0 : 1.0 - hamming_fraction(x, settle(x, p));
  }
  const double count = static_cast<double>(test.size());
  acc.exact /= count;
  acc.bits /= count;
  acc.strict /= count;
  return acc;
}

TestMode parse_test_mode(std::string_view text) {
  if (text == "enumerate") return TestMode::enumerate;
  if (text == "sample1000" || text == "sample") return TestMode::sample;
  throw ParseError("unknown test mode '" + std::string(text) + "'");
}

std::vector<Bits> draw_training_set(const EdgeGraph& base, int N, TrainSampling sampling, Rng& rng) {
  if (N < 1) throw PreconditionError("training set size must be positive");
  if (sampling == TrainSampling::iid) return sample_orbit(base, N, rng);
  if (base.vertices() <= kMaxEnumerationVertices) {
    const std::size_t size = isomorphism_class_size(base);
    if (static_cast<std::size_t>(N) > size) {
      throw PreconditionError("cannot draw " + std::to_string(N) + " distinct graphs from a class of " +
                              std::to_string(size));
    }
  }
  std::set<Bits> seen;
  std::vector<Bits> out;
  const long max_draws = 1000L * N + 1000;
  for (long d = 0; d < max_draws && static_cast<int>(out.size()) < N; ++d) {
    auto x = random_orbit_sample(base, rng).bits();
    if (seen.insert(x).second) out.push_back(std::move(x));
  }
  if (static_cast<int>(out.size()) < N) {
    throw PreconditionError("could not draw " + std::to_string(N) + " distinct orbit samples");
  }
  return out;
}

std::vector<TrialRecord> generalization_curve(const CurveConfig& cfg) {
  const EdgeGraph base = make_family(cfg.family);
  const std::string family = cfg.family.to_string();
  std::vector<Bits> class_members;
  if (cfg.test_mode == TestMode::enumerate) {
    if (base.vertices() > kMaxEnumerationVertices) {
      throw CapacityError("enumerate test mode needs v <= " + std::to_string(kMaxEnumerationVertices));
    }
    for (const auto& g : enumerate_isomorphism_class(base)) class_members.push_back(g.bits());
  }
  if (cfg.trials < 1) throw PreconditionError("trials must be positive");

  struct Task {
    int N;
    int trial;
  };
  std::vector<Task> tasks;
  for (int N : cfg.Ns) {
    for (int t = 0; t < cfg.trials; ++t) tasks.push_back({N, t});
  }
  std::mutex callback_mutex;

  return parallel_map(tasks.size(), cfg.jobs, [&](std::size_t idx) {
    const Task task = tasks[idx];
    const auto start = std::chrono::steady_clock::now();
    TrialRecord rec;
    rec.family = family;
    rec.v = cfg.family.v;
    rec.k_param = cfg.family.k_param();
    rec.rule = rule_name(cfg.train.rule);
    rec.N = task.N;
    rec.trial = task.trial;
    rec.seed = derive_seed(cfg.seed, "train:" + family, {u64(cfg.family.v), u64(task.N), u64(task.trial)});

    Rng train_rng(rec.seed);
    const auto train_set = draw_training_set(base, task.N, cfg.sampling, train_rng);
    std::vector<Bits> sampled_test;
    if (cfg.test_mode == TestMode::sample) {
      Rng test_rng(derive_seed(cfg.seed, "test:" + family, {u64(cfg.family.v), u64(task.N), u64(task.trial)}));
      sampled_test = sample_orbit(base, cfg.test_size, test_rng);
    }
    const std::vector<Bits>& test = cfg.test_mode == TestMode::sample ? sampled_test : class_members;

    TrainConfig tc = cfg.train;
    tc.seed = rec.seed;
    tc.record_trace = false;
    NetParams params;
    try {
      params = train(train_set, tc).params;
    } catch (const DivergenceError&) {
      rec.failed = true;
      return rec;
    }
    const auto train_acc = accuracy(params, train_set, cfg.train.margin_target);
    const auto test_acc = accuracy(params, test, cfg.train.margin_target);
    const auto proj = project_invariant(params);
    rec.train_frac = train_acc.exact;
    rec.test_exact = test_acc.exact;
    rec.test_bits = test_acc.bits;
    rec.test_strict = test_acc.strict;
    rec.residual_fraction = proj.residual_fraction;
    rec.beta = proj.beta.as_array();
    if (cfg.timing) {
      rec.wallclock_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
    if (cfg.on_trial) {
      std::lock_guard lock(callback_mutex);
      cfg.on_trial(TrialContext{rec, params, train_set});
    }
    return rec;
  });
}

S50Search find_s50(const std::function<double(int)>& mean_accuracy, double threshold, int n_max) {
  if (n_max < 1) throw PreconditionError("n_max must be positive");
  S50Search out;
  std::map<int, double> cache;
  auto eval = [&](int N) {
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    const double acc = mean_accuracy(N);
    cache[N] = acc;
    out.evaluated.emplace_back(N, acc);
    return acc;
  };
  int lo = 0;
  int hi = 1;
  for (;;) {
    if (eval(hi) >= threshold) break;
    lo = hi;
    if (hi >= n_max) {
      out.censored = true;
      out.s50 = n_max;
      return out;
    }
    hi = std::min(2 * hi, n_max);
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (eval(mid) >= threshold) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.s50 = hi;
  return out;
}

LogLogFit fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DimensionError("fit inputs differ in length");
  if (xs.size() < 2) throw PreconditionError("log-log fit needs at least two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw PreconditionError("log-log fit needs positive values");
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(xs.size());
  const double den = m * sxx - sx * sx;
  if (den == 0.0) throw PreconditionError("log-log fit needs distinct x values");
  LogLogFit fit;
  fit.slope = (m * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / m;
  return fit;
}

ScalingResult s50_scaling(const ScalingConfig& cfg) {
  if (!std::is_sorted(cfg.vs.begin(), cfg.vs.end())) throw PreconditionError("vertex counts must be nondecreasing");
  ScalingResult result;
  for (int v : cfg.vs) {
    const FamilySpec spec = cfg.family.at(v);
    const EdgeGraph base = make_family(spec);
    const std::string family = spec.to_string();
    std::vector<std::vector<Bits>> tests(cfg.trials);
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng(derive_seed(cfg.seed, "s50-test:" + family, {u64(v), u64(t)}));
      tests[t] = sample_orbit(base, cfg.test_size, rng);
    }
    auto mean_accuracy = [&](int N) {
      auto accs = parallel_map(static_cast<std::size_t>(cfg.trials), cfg.jobs, [&](std::size_t t) {
        Rng rng(derive_seed(cfg.seed, "s50-train:" + family, {u64(v), u64(N), t}));
        const auto train_set = sample_orbit(base, N, rng);
        TrainConfig tc = cfg.train;
        tc.record_trace = false;
        tc.seed = derive_seed(cfg.seed, "s50-cfg", {u64(v), u64(N), t});
        try {
          return accuracy(train(train_set, tc).params, tests[t], tc.margin_target).exact;
        } catch (const DivergenceError&) {
          return 0.0;
        }
      });
      return std::accumulate(accs.begin(), accs.end(), 0.0) / static_cast<double>(accs.size());
    };
    const auto search = find_s50(mean_accuracy, cfg.threshold, cfg.n_max);
    result.points.push_back({v, search.s50, search.censored, search.evaluated});
  }
  std::vector<double> xs, ys;
  for (const auto& pt : result.points) {
    if (pt.censored) continue;
    xs.push_back(pt.v);
    ys.push_back(pt.s50);
  }
  result.fitted_points = static_cast<int>(xs.size());
  if (xs.size() >= 2) result.fit = fit_loglog(xs, ys);
  return result;
}

WeightHistogram weight_histogram(const NetParams& p) {
  const int v = vertices_for_edges(p.n());
  const EdgeLayout layout(v);
  const std::size_t n = p.n();
  WeightHistogram h;
  double mean_abs_b = 0.0;
  for (std::size_t j = 0; j < n; ++j) mean_abs_b += std::abs(p.bias(j));
  mean_abs_b = n ? mean_abs_b / static_cast<double>(n) : 0.0;
  h.normalized = mean_abs_b > 0.0;
  h.scale = h.normalized ? 1.0 / mean_abs_b : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    h.bias.push_back(p.bias(i) * h.scale);
    for (std::size_t j = i + 1; j < n; ++j) {
      (layout.adjacent(i, j) ? h.adjacent : h.non_adjacent).push_back(p.weight(i, j) * h.scale);
    }
  }
  const std::vector<double>* groups[3] = {&h.adjacent, &h.non_adjacent, &h.bias};
  for (int c = 0; c < 3; ++c) {
    const auto& g = *groups[c];
    if (g.empty()) continue;
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    double var = 0.0;
    for (double x : g) var += (x - mean) * (x - mean);
    h.mean[c] = mean;
    h.stddev[c] = std::sqrt(var / static_cast<double>(g.size()));
  }
  return h;
}

DenoiseScore denoise_accuracy(const NetParams& p, std::span<const Bits> clean, double noise, Rng& rng) {
  if (clean.empty()) throw PreconditionError("denoising needs a nonempty test set");
  if (noise < 0.0 || noise >= 0.5) throw PreconditionError("noise fraction must lie in [0, 0.5)");
  const std::size_t n = p.n();
  const auto flips = static_cast<std::size_t>(std::llround(noise * static_cast<double>(n)));
  std::vector<std::size_t> idx(n);
  DenoiseScore score;
  for (const auto& x : clean) {
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t t = 0; t < flips; ++t) {
      const std::size_t r = t + rng.uniform_index(n - t);
      std::swap(idx[t], idx[r]);
    }
    const Bits noisy = flip_bits(x, std::span<const std::size_t>(idx.data(), flips));
    const Bits out = settle(noisy, p);
    score.exact += out == x;
    score.bits += 1.0 - hamming_fraction(out, x);
  }
  score.exact /= static_cast<double>(clean.size());
  score.bits /= static_cast<double>(clean.size());
  return score;
}

std::vector<HcpRecord> hcp_denoise(const HcpConfig& cfg) {
  if (!(cfg.noise > 0.0 && cfg.noise < 0.5) && cfg.noise != 0.0) {
    throw PreconditionError("noise fraction must lie in (0, 0.5)");
  }
  FamilySpec spec;
  spec.family = Family::clique;
  spec.v = cfg.v;
  spec.k = cfg.k;
  const EdgeGraph base = make_family(spec);
  struct Task {
    int N;
    int trial;
  };
  std::vector<Task> tasks;
  for (int N : cfg.Ns) {
    for (int t = 0; t < cfg.trials; ++t) tasks.push_back({N, t});
  }
  return parallel_map(tasks.size(), cfg.jobs, [&](std::size_t i) {
    const Task task = tasks[i];
    const std::initializer_list<std::uint64_t> key = {u64(cfg.v), u64(cfg.k), u64(task.N), u64(task.trial)};
    Rng train_rng(derive_seed(cfg.seed, "hcp-train", key));
    Rng test_rng(derive_seed(cfg.seed, "hcp-test", key));
    Rng noise_rng(derive_seed(cfg.seed, "hcp-noise", key));
    const auto train_set = sample_orbit(base, task.N, train_rng);
    const auto test = sample_orbit(base, cfg.n_test, test_rng);
    TrainConfig tc = cfg.train;
    tc.record_trace = false;
    tc.seed = derive_seed(cfg.seed, "hcp-cfg", key);
    const NetParams p = train(train_set, tc).params;
    const auto gen = accuracy(p, test, tc.margin_target);
    const auto den = denoise_accuracy(p, test, cfg.noise, noise_rng);
    return HcpRecord{task.N, task.trial, gen.exact, gen.bits, den.exact, den.bits};
  });
}

std::vector<DescentRecord> double_descent_sweep(const DescentConfig& cfg) {
  FamilySpec spec;
  spec.family = Family::clique;
  spec.v = cfg.v;
  spec.k = cfg.k;
  const EdgeGraph base = make_family(spec);
  struct Task {
    int N;
    int trial;
  };
  std::vector<Task> tasks;
  for (int N : cfg.Ns) {
    for (int t = 0; t < cfg.trials; ++t) tasks.push_back({N, t});
  }
  return parallel_map(tasks.size(), cfg.jobs, [&](std::size_t i) {
    const Task task = tasks[i];
    const std::initializer_list<std::uint64_t> key = {u64(cfg.v), u64(cfg.k), u64(task.N), u64(task.trial)};
    Rng train_rng(derive_seed(cfg.seed, "dd-train", key));
    Rng test_rng(derive_seed(cfg.seed, "dd-test", key));
    const auto train_set = sample_orbit(base, task.N, train_rng);
    const auto test = sample_orbit(base, cfg.n_test, test_rng);
    TrainConfig tc = cfg.train;
    tc.record_trace = false;
    tc.seed = derive_seed(cfg.seed, "dd-cfg", key);
    DescentRecord rec{task.N, task.trial, 1.0};
    try {
      rec.bit_error = 1.0 - accuracy(train(train_set, tc).params, test, tc.margin_target).bits;
    } catch (const DivergenceError&) {
    }
    return rec;
  });
}

namespace {

struct EdgeCounts {
  std::vector<double> adj;
  std::vector<double> non;
  std::vector<double> sign;
};

EdgeCounts edge_counts(const EdgeGraph& x) {
  const int v = x.vertices();
  const auto deg = x.degrees();
  const auto m = static_cast<long>(x.sparsity());
  EdgeCounts c;
  std::size_t j = 0;
  for (int a = 0; a < v; ++a) {
    for (int b = a + 1; b < v; ++b, ++j) {
      const long self = x.bits()[j];
      const long adj = deg[a] + deg[b] - 2 * self;
      c.adj.push_back(static_cast<double>(adj));
      c.non.push_back(static_cast<double>(m - self - adj));
      c.sign.push_back(self ? -1.0 : 1.0);
    }
  }
  return c;
}

double beta_loss(const EdgeCounts& c, const std::array<double, 3>& beta, std::array<double, 3>* grad) {
  double loss = 0.0;
  if (grad) grad->fill(0.0);
  for (std::size_t j = 0; j < c.adj.size(); ++j) {
    const double gap = c.sign[j] * (beta[0] * c.adj[j] + beta[1] * c.non[j] + beta[2]);
    const double e = std::exp(std::min(-gap, kExpClamp));
    loss += e;
    if (grad) {
      (*grad)[0] -= e * c.sign[j] * c.adj[j];
      (*grad)[1] -= e * c.sign[j] * c.non[j];
      (*grad)[2] -= e * c.sign[j];
    }
  }
  return loss;
}

// Fixed-point test from integer neighbour counts, so isomorphic graphs get bit-identical answers.
bool invariant_fixed_point(const InvariantCoords& beta, const EdgeGraph& x) {
  const auto gaps = invariant_energy_gaps(beta, x);
  for (std::size_t j = 0; j < gaps.size(); ++j) {
    const bool ok = x.bits()[j] ? gaps[j] > 0.0 : gaps[j] >= 0.0;
    if (!ok) return false;
  }
  return true;
}

}  // namespace

HnngicVerdict hnngic(const EdgeGraph& x1, const EdgeGraph& x2, int budget) {
  if (x1.vertices() != x2.vertices()) throw DimensionError("hnngic needs graphs on the same vertex count");
  if (budget < 0) throw PreconditionError("budget must be non-negative");
  HnngicVerdict out;
  if (budget == 0 || x1.size() == 0) return out;
  const EdgeCounts counts = edge_counts(x1);
  std::array<double, 3> beta{0.0, 0.0, 0.0};
  std::array<double, 3> grad{};
  double step = 1.0 / static_cast<double>(x1.size());
  double loss = beta_loss(counts, beta, &grad);
  int it = 0;
  for (; it < budget; ++it) {
    const double gnorm = std::sqrt(grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2]);
    if (gnorm == 0.0 || !std::isfinite(gnorm)) break;
    std::array<double, 3> next{};
    double next_loss = 0.0;
    int halvings = 0;
    for (;;) {
      for (int c = 0; c < 3; ++c) next[c] = beta[c] - step * grad[c];
      next_loss = beta_loss(counts, next, nullptr);
      if (next_loss <= loss || ++halvings > 200) break;
      step *= 0.5;
    }
    if (halvings > 200) break;
    beta = next;
    loss = beta_loss(counts, beta, &grad);
  }
  out.iterations = it;
  out.loss = loss;
  out.beta_star = {beta[0], beta[1], beta[2]};
  out.x1_memorized = invariant_fixed_point(out.beta_star, x1);
  out.x2_fixed = invariant_fixed_point(out.beta_star, x2);
  out.verdict = out.x1_memorized && !out.x2_fixed ? Verdict::True : Verdict::Unknown;
  return out;
}

HeatmapExport heatmap_export(const NetParams& p) {
  const int v = vertices_for_edges(p.n());
  const EdgeLayout layout(v);
  HeatmapExport out;
  out.n = p.n();
  out.weights.assign(p.weights().begin(), p.weights().end());
  out.classes.assign(out.n * out.n, 0);
  for (std::size_t i = 0; i < out.n; ++i) {
    for (std::size_t j = 0; j < out.n; ++j) {
      if (i != j) out.classes[i * out.n + j] = layout.adjacent(i, j) ? 1 : 2;
    }
  }
  return out;
}

}  // namespace hopnet
