#include "hopnet/hopfield_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hopnet {

namespace {

void check_length(const Bits& x, const NetParams& p) {
  if (x.size() != p.n()) {
    throw DimensionError("state of length " + std::to_string(x.size()) + " for a network of " +
                         std::to_string(p.n()) + " neurons");
  }
}

std::vector<std::size_t> support(const Bits& x) {
  std::vector<std::size_t> s;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j]) s.push_back(j);
  }
  return s;
}

}  // namespace

NetParams::NetParams(std::size_t n) : n_(n), w_(n * n, 0.0), b_(n, 0.0) {}

NetParams NetParams::from_dense(std::size_t n, std::vector<double> weights, std::vector<double> bias) {
  if (weights.size() != n * n || bias.size() != n) {
    throw DimensionError("dense parameters do not match n=" + std::to_string(n));
  }
  NetParams p;
  p.n_ = n;
  p.w_ = std::move(weights);
  p.b_ = std::move(bias);
  if (!p.is_symmetric_zero_diagonal()) {
    throw PreconditionError("weight matrix must be symmetric with zero diagonal");
  }
  return p;
}

NetParams NetParams::from_upper(std::size_t n, std::span<const double> upper, std::vector<double> bias) {
  if (upper.size() != n * (n - (n > 0 ? 1 : 0)) / 2 || bias.size() != n) {
    throw DimensionError("upper-triangle parameters do not match n=" + std::to_string(n));
  }
  NetParams p(n);
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) p.set_weight(i, j, upper[t++]);
  }
  p.b_ = std::move(bias);
  return p;
}

std::vector<double> NetParams::upper_triangle() const {
  std::vector<double> out;
  out.reserve(n_ * (n_ > 0 ? n_ - 1 : 0) / 2);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) out.push_back(w_[i * n_ + j]);
  }
  return out;
}

void NetParams::set_weight(std::size_t i, std::size_t j, double value) {
  if (i >= n_ || j >= n_) throw DimensionError("weight index out of range");
  if (i == j) throw PreconditionError("diagonal weights are fixed at zero");
  w_[i * n_ + j] = value;
  w_[j * n_ + i] = value;
}

double NetParams::norm_sq() const {
  double s = 0.0;
  for (double w : w_) s += w * w;
  for (double b : b_) s += b * b;
  return s;
}

NetParams NetParams::scaled(double a) const {
  NetParams out = *this;
  for (double& w : out.w_) w *= a;
  for (double& b : out.b_) b *= a;
  for (std::size_t i = 0; i < n_; ++i) out.w_[i * n_ + i] = 0.0;
  return out;
}

NetParams& NetParams::operator+=(const NetParams& other) {
  if (other.n_ != n_) throw DimensionError("adding parameters of different sizes");
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] += other.w_[i];
  for (std::size_t i = 0; i < b_.size(); ++i) b_[i] += other.b_[i];
  return *this;
}

NetParams& NetParams::operator-=(const NetParams& other) {
  if (other.n_ != n_) throw DimensionError("subtracting parameters of different sizes");
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] -= other.w_[i];
  for (std::size_t i = 0; i < b_.size(); ++i) b_[i] -= other.b_[i];
  return *this;
}

bool NetParams::is_symmetric_zero_diagonal() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (w_[i * n_ + i] != 0.0) return false;
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (w_[i * n_ + j] != w_[j * n_ + i]) return false;
    }
  }
  return true;
}

NetParams operator+(NetParams a, const NetParams& b) { return a += b; }
NetParams operator-(NetParams a, const NetParams& b) { return a -= b; }

double energy(const Bits& x, const NetParams& p) {
  check_length(x, p);
  const auto s = support(x);
  double e = 0.0;
  for (std::size_t j : s) {
    const auto row = p.row(j);
    double quad = 0.0;
    for (std::size_t l : s) quad += row[l];
    e += 0.5 * quad + p.bias(j);
  }
  return e;
}

double energy_gap(const Bits& x, std::size_t j, const NetParams& p) {
  check_length(x, p);
  if (j >= p.n()) throw DimensionError("neuron index out of range");
  const auto row = p.row(j);
  double h = p.bias(j);
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (x[l]) h += row[l];
  }
  return x[j] ? -h : h;
}

std::vector<double> local_fields(const Bits& x, const NetParams& p) {
  check_length(x, p);
  std::vector<double> h(p.biases().begin(), p.biases().end());
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (!x[l]) continue;
    const auto row = p.row(l);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] += row[j];
  }
  return h;
}

std::vector<double> energy_gaps(const Bits& x, const NetParams& p) {
  auto h = local_fields(x, p);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (x[j]) h[j] = -h[j];
  }
  return h;
}

DynamicsResult run_dynamics(const Bits& x0, const NetParams& p, int max_sweeps, bool record_energy) {
  check_length(x0, p);
  const std::size_t n = p.n();
  if (max_sweeps <= 0) max_sweeps = static_cast<int>(std::max<std::size_t>(1, 4 * n));
  DynamicsResult result;
  result.fixed_point = x0;
  Bits& x = result.fixed_point;
  auto h = local_fields(x, p);
  if (record_energy) result.energy_trace.push_back(energy(x, p));

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    long flips = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint8_t next = h[j] < 0.0 ? 1 : 0;
      if (next == x[j]) continue;
      x[j] = next;
      ++flips;
      const double sign = next ? 1.0 : -1.0;
      const auto row = p.row(j);
      for (std::size_t l = 0; l < n; ++l) h[l] += sign * row[l];
      if (record_energy) result.energy_trace.push_back(energy(x, p));
    }
    result.flips += flips;
    result.sweeps = sweep;
    if (flips == 0) {
      // Incremental fields can drift by rounding; confirm against fresh ones.
      h = local_fields(x, p);
      bool stable = true;
      for (std::size_t j = 0; j < n && stable; ++j) stable = (h[j] < 0.0 ? 1 : 0) == x[j];
      if (stable) return result;
    }
  }
  throw BudgetExhaustedError("dynamics did not converge within " + std::to_string(max_sweeps) + " sweeps",
                             x);
}

bool is_fixed_point(const Bits& x, const NetParams& p) {
  const auto h = local_fields(x, p);
  for (std::size_t j = 0; j < h.size(); ++j) {
    if ((h[j] < 0.0 ? 1 : 0) != x[j]) return false;
  }
  return true;
}

bool is_strictly_memorized(const Bits& x, const NetParams& p, double margin) {
  if (margin < 0.0) throw PreconditionError("margin must be non-negative");
  for (double g : energy_gaps(x, p)) {
    if (margin == 0.0 ? !(g > 0.0) : !(g >= margin)) return false;
  }
  return true;
}

double min_energy_gap(const Bits& x, const NetParams& p) {
  const auto gaps = energy_gaps(x, p);
  return gaps.empty() ? 0.0 : *std::min_element(gaps.begin(), gaps.end());
}

MemorizationReport memorizes_set(std::span<const Bits> S, const NetParams& p, double margin) {
  MemorizationReport report;
  if (S.empty()) return report;
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (!is_strictly_memorized(S[i], p, margin)) report.failing.push_back(i);
  }
  report.fraction = 1.0 - static_cast<double>(report.failing.size()) / static_cast<double>(S.size());
  return report;
}

}  // namespace hopnet
