#include "hopnet/feature_map.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hopnet {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

}  // namespace

std::size_t weight_slot(std::size_t n, std::size_t i, std::size_t j) {
  if (i == j || i >= n || j >= n) throw DimensionError("weight slot needs two distinct neurons");
  if (i > j) std::swap(i, j);
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

double SparseVec::dot(std::span<const double> dense) const {
  double s = 0.0;
  for (std::size_t t = 0; t < index.size(); ++t) s += value[t] * dense[index[t]];
  return s;
}

double SparseVec::dot(const SparseVec& other) const {
  double s = 0.0;
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < index.size() && b < other.index.size()) {
    if (index[a] == other.index[b]) {
      s += value[a++] * other.value[b++];
    } else if (index[a] < other.index[b]) {
      ++a;
    } else {
      ++b;
    }
  }
  return s;
}

double SparseVec::norm_sq() const {
  double s = 0.0;
  for (double v : value) s += v * v;
  return s;
}

void SparseVec::axpy(double scale, std::span<double> dense) const {
  for (std::size_t t = 0; t < index.size(); ++t) dense[index[t]] += scale * value[t];
}

OmegaVec OmegaVec::from_values(std::vector<double> values) {
  const double root = (std::sqrt(1.0 + 8.0 * static_cast<double>(values.size())) - 1.0) / 2.0;
  const auto n = static_cast<std::size_t>(std::llround(root));
  if (omega_dim(n) != values.size()) {
    throw LayoutError("omega length " + std::to_string(values.size()) + " is not of the form n(n+1)/2");
  }
  OmegaVec w;
  w.n_ = n;
  w.values_ = std::move(values);
  return w;
}

double OmegaVec::norm_sq() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double OmegaVec::dot(const OmegaVec& other) const {
  if (other.values_.size() != values_.size()) throw DimensionError("omega vectors differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * other.values_[i];
  return s;
}

OmegaVec theta_to_omega(const NetParams& p) {
  const std::size_t n = p.n();
  OmegaVec w(n);
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) w[t++] = std::numbers::sqrt2 * p.weight(i, j);
  }
  for (std::size_t j = 0; j < n; ++j) w[t++] = p.bias(j);
  return w;
}

NetParams omega_to_theta(const OmegaVec& w) {
  const std::size_t n = w.n();
  if (omega_dim(n) != w.size()) throw LayoutError("omega vector has an inconsistent layout");
  NetParams p(n);
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) p.set_weight(i, j, w[t++] * kInvSqrt2);
  }
  for (std::size_t j = 0; j < n; ++j) p.set_bias(j, w[t++]);
  return p;
}

SparseVec u_j(const Bits& x, std::size_t j) {
  const std::size_t n = x.size();
  if (j >= n) throw DimensionError("neuron index out of range");
  const double y = spin_sign(x, j);
  SparseVec u;
  for (std::size_t l = 0; l < n; ++l) {
    if (l == j || !x[l]) continue;
    u.index.push_back(weight_slot(n, j, l));
    u.value.push_back(y * kInvSqrt2);
  }
  u.index.push_back(bias_slot(n, j));
  u.value.push_back(y);
  return u;
}

SparseVec u_bar_sparse(const Bits& x) {
  const std::size_t n = x.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  SparseVec u;
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++t) {
      const double num = (x[j] ? spin_sign(x, i) : 0.0) + (x[i] ? spin_sign(x, j) : 0.0);
      if (num != 0.0) {
        u.index.push_back(t);
        u.value.push_back(num * kInvSqrt2 * inv_n);
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    u.index.push_back(t + j);
    u.value.push_back(spin_sign(x, j) * inv_n);
  }
  return u;
}

std::vector<double> u_bar(const Bits& x) {
  std::vector<double> dense(omega_dim(x.size()), 0.0);
  accumulate_u_bar(x, 1.0, dense);
  return dense;
}

void accumulate_u_bar(const Bits& x, double scale, std::span<double> dense) {
  const std::size_t n = x.size();
  if (dense.size() != omega_dim(n)) throw DimensionError("u_bar accumulator has the wrong length");
  const double c = scale / static_cast<double>(n);
  const double cw = c * kInvSqrt2;
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double yi = spin_sign(x, i);
    for (std::size_t j = i + 1; j < n; ++j, ++t) {
      const double num = (x[j] ? yi : 0.0) + (x[i] ? spin_sign(x, j) : 0.0);
      if (num != 0.0) dense[t] += num * cw;
    }
  }
  for (std::size_t j = 0; j < n; ++j) dense[t + j] += spin_sign(x, j) * c;
}

}  // namespace hopnet
