#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "hopnet/error.hpp"
#include "hopnet/graph_codec.hpp"

namespace hopnet {

// Symmetric zero-diagonal weight matrix W (dense, row-major) and biases b.
class NetParams {
 public:
  NetParams() = default;
  explicit NetParams(std::size_t n);

  // Validates W = W^T and diag(W) = 0 exactly.
  static NetParams from_dense(std::size_t n, std::vector<double> weights,
                              std::vector<double> bias);
  // Builds W from its strict upper triangle in row-major order.
  static NetParams from_upper(std::size_t n, std::span<const double> upper,
                              std::vector<double> bias);

  std::size_t n() const { return n_; }
  double weight(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
  double bias(std::size_t j) const { return b_[j]; }
  std::span<const double> row(std::size_t j) const { return {w_.data() + j * n_, n_}; }
  std::span<const double> weights() const { return w_; }
  std::span<const double> biases() const { return b_; }
  std::vector<double> upper_triangle() const;

  // Sets W_ij and W_ji together.
  void set_weight(std::size_t i, std::size_t j, double value);
  void set_bias(std::size_t j, double value) { b_[j] = value; }

  // ||W||_F^2 + ||b||^2.
  double norm_sq() const;
  NetParams scaled(double a) const;
  NetParams& operator+=(const NetParams& other);
  NetParams& operator-=(const NetParams& other);
  bool operator==(const NetParams&) const = default;

  bool is_symmetric_zero_diagonal() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> w_;
  std::vector<double> b_;
};

NetParams operator+(NetParams a, const NetParams& b);
NetParams operator-(NetParams a, const NetParams& b);

// Carries the state reached when the sweep budget ran out.
class BudgetExhaustedError : public Error {
 public:
  BudgetExhaustedError(const std::string& message, Bits last_state)
      : Error("budget-exhausted", message), last_state_(std::move(last_state)) {}
  const Bits& last_state() const { return last_state_; }

 private:
  Bits last_state_;
};

struct DynamicsResult {
  Bits fixed_point;
  int sweeps = 0;
  long flips = 0;
  std::vector<double> energy_trace;  // initial energy, then one entry per flip
};

// E(x) = 1/2 x^T W x + b^T x.
double energy(const Bits& x, const NetParams& p);

// (1 - 2 x_j)(w_j^T x + b_j) = E(x^(j)) - E(x).
double energy_gap(const Bits& x, std::size_t j, const NetParams& p);
std::vector<double> energy_gaps(const Bits& x, const NetParams& p);
// Local fields W x + b.
std::vector<double> local_fields(const Bits& x, const NetParams& p);

// max_sweeps <= 0 selects the default 4n.
DynamicsResult run_dynamics(const Bits& x0, const NetParams& p, int max_sweeps = 0,
                            bool record_energy = false);

bool is_fixed_point(const Bits& x, const NetParams& p);

// All gaps >= margin; margin == 0 means all gaps > 0.
bool is_strictly_memorized(const Bits& x, const NetParams& p, double margin);
double min_energy_gap(const Bits& x, const NetParams& p);

struct MemorizationReport {
  double fraction = 1.0;
  std::vector<std::size_t> failing;
};

MemorizationReport memorizes_set(std::span<const Bits> S, const NetParams& p, double margin);

}  // namespace hopnet
