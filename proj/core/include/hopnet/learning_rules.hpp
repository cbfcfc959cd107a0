#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopnet/feature_map.hpp"
#include "hopnet/hopfield_core.hpp"

namespace hopnet {

enum class Rule { mef_gd, mef_agd, perceptron, delta, outer_product };

std::string rule_name(Rule rule);
Rule parse_rule(std::string_view text);

struct TrainConfig {
  Rule rule = Rule::mef_gd;
  // 0 selects the rule default: 0.1 / (n |S|) for MEF and delta, 1 for perceptron.
  double step_size = 0.0;
  int max_iters = 1000;
  double margin_target = 1.0;
  // Stop once the loss falls below stop_tol (0 disables).
  double stop_tol = 0.0;
  // When false, iterative rules run the full max_iters.
  bool stop_at_margin = true;
  std::uint64_t seed = 0;
  // Standard deviation of the optional Gaussian initialization (0 = zero init).
  double init_scale = 0.0;
  bool record_trace = true;
};

struct TraceRow {
  int iter = 0;
  double loss = 0.0;        // error count for the perceptron
  double train_frac = 0.0;  // fraction of S with every gap >= margin_target
  double grad_norm = 0.0;
};

struct TrainResult {
  NetParams params;
  std::vector<TraceRow> trace;
  int iterations = 0;
  bool margin_reached = false;
  bool saturated = false;
  double final_loss = 0.0;
  double min_margin = 0.0;
  double step_size = 0.0;  // step in use at exit
};

struct LossValue {
  double value = 0.0;
  bool saturated = false;
};

// Exponents above this are clamped before exponentiation.
constexpr double kExpClamp = 50.0;

LossValue mef_loss(const NetParams& p, std::span<const Bits> S);

struct MefGradient {
  OmegaVec omega;   // dL/d omega
  NetParams theta;  // the same gradient in theta coordinates
  bool saturated = false;
};

MefGradient mef_gradient(const NetParams& p, std::span<const Bits> S);

TrainResult train(std::span<const Bits> S, const TrainConfig& cfg,
                  const std::optional<NetParams>& init = std::nullopt);

// Runs MEF gradient descent from 0 and reports the iterates at check points.
// Used for implicit-bias studies where the run is longer than any stop rule.
struct MefPathPoint {
  long iter = 0;
  NetParams params;
  double loss = 0.0;
};
std::vector<MefPathPoint> mef_gd_path(std::span<const Bits> S, std::span<const long> checkpoints,
                                      double step_size = 0.0);

// Cosine between theta_to_omega(p) and ref.
double directional_alignment(const NetParams& p, const OmegaVec& ref);

}  // namespace hopnet
