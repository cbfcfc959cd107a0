#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hopnet/graph_codec.hpp"
#include "hopnet/hopfield_core.hpp"
#include "hopnet/invariant_subspace.hpp"
#include "hopnet/learning_rules.hpp"

namespace hopnet {

struct AccuracyResult {
  double exact = 0.0;   // fraction of fixed points
  double bits = 0.0;    // mean fraction of bits left correct by the dynamics
  double strict = 0.0;  // fraction with every gap >= the strict margin
};

AccuracyResult accuracy(const NetParams& p, std::span<const Bits> test, double strict_margin = 1.0);

enum class TestMode { enumerate, sample };
enum class TrainSampling { iid, distinct };

TestMode parse_test_mode(std::string_view text);

struct TrialRecord {
  std::string family;
  int v = 0;
  int k_param = 0;
  std::string rule;
  int N = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double train_frac = 0.0;  // fraction of the training set that are fixed points
  double test_exact = 0.0;
  double test_bits = 0.0;
  double test_strict = 0.0;
  double residual_fraction = 0.0;
  std::array<double, 3> beta{};
  long wallclock_ms = 0;
  bool failed = false;
};

struct TrialContext {
  const TrialRecord& record;
  const NetParams& params;
  std::span<const Bits> train;
};

struct CurveConfig {
  FamilySpec family;
  TrainConfig train;
  std::vector<int> Ns;
  int trials = 10;
  TestMode test_mode = TestMode::sample;
  int test_size = 1000;
  TrainSampling sampling = TrainSampling::iid;
  std::uint64_t seed = 0;
  int jobs = 1;
  // Wall-clock timing is recorded only when enabled so that reruns are byte-identical.
  bool timing = false;
  // Called once per finished trial; calls are serialized but may arrive out of order.
  std::function<void(const TrialContext&)> on_trial;
};

// Draws N training graphs from the orbit of base.
std::vector<Bits> draw_training_set(const EdgeGraph& base, int N, TrainSampling sampling, Rng& rng);

std::vector<TrialRecord> generalization_curve(const CurveConfig& cfg);

struct S50Search {
  int s50 = 0;
  bool censored = false;
  std::vector<std::pair<int, double>> evaluated;  // (N, mean accuracy) in search order
};

// Doubling then bisection for the smallest N with mean_accuracy(N) >= threshold.
S50Search find_s50(const std::function<double(int)>& mean_accuracy, double threshold, int n_max);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LogLogFit fit_loglog(std::span<const double> xs, std::span<const double> ys);

struct ScalingPoint {
  int v = 0;
  int s50 = 0;
  bool censored = false;
  std::vector<std::pair<int, double>> evaluated;
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  LogLogFit fit;
  int fitted_points = 0;
};

struct ScalingConfig {
  FamilyTemplate family;
  std::vector<int> vs;
  TrainConfig train;
  int trials = 5;
  int test_size = 1000;
  double threshold = 0.5;
  int n_max = 4096;
  std::uint64_t seed = 0;
  int jobs = 1;
};

ScalingResult s50_scaling(const ScalingConfig& cfg);

struct WeightHistogram {
  double scale = 1.0;
  bool normalized = false;
  std::vector<double> adjacent;
  std::vector<double> non_adjacent;
  std::vector<double> bias;
  std::array<double, 3> mean{};
  std::array<double, 3> stddev{};
};

// Scales so that mean |b_j| = 1; with zero biases the values are left as is
// and normalized is false.
WeightHistogram weight_histogram(const NetParams& p);

struct HcpConfig {
  int v = 32;
  int k = 16;
  std::vector<int> Ns;
  double noise = 0.05;
  int n_test = 1000;
  int trials = 5;
  std::uint64_t seed = 0;
  TrainConfig train;
  int jobs = 1;
};

struct HcpRecord {
  int N = 0;
  int trial = 0;
  double gen_exact = 0.0;
  double gen_bits = 0.0;
  double denoise_exact = 0.0;
  double denoise_bits = 0.0;
};

struct DenoiseScore {
  double exact = 0.0;
  double bits = 0.0;
};

// Flips round(noise * n) distinct random bits of each clean state and runs the dynamics.
DenoiseScore denoise_accuracy(const NetParams& p, std::span<const Bits> clean, double noise, Rng& rng);

std::vector<HcpRecord> hcp_denoise(const HcpConfig& cfg);

struct DescentConfig {
  int v = 32;
  int k = 8;
  std::vector<int> Ns;
  int trials = 3;
  int n_test = 1000;
  std::uint64_t seed = 0;
  TrainConfig train;
  int jobs = 1;
};

struct DescentRecord {
  int N = 0;
  int trial = 0;
  double bit_error = 0.0;
};

std::vector<DescentRecord> double_descent_sweep(const DescentConfig& cfg);

enum class Verdict { True, Unknown };

struct HnngicVerdict {
  Verdict verdict = Verdict::Unknown;
  InvariantCoords beta_star;
  bool x1_memorized = false;
  bool x2_fixed = false;
  int iterations = 0;
  double loss = 0.0;
};

HnngicVerdict hnngic(const EdgeGraph& x1, const EdgeGraph& x2, int budget = 2000);

struct HeatmapExport {
  std::size_t n = 0;
  std::vector<double> weights;  // row-major n x n
  std::vector<int> classes;     // 0 diagonal, 1 adjacent, 2 non-adjacent
};

HeatmapExport heatmap_export(const NetParams& p);

}  // namespace hopnet
