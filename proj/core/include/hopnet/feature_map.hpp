#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hopnet/graph_codec.hpp"
#include "hopnet/hopfield_core.hpp"

namespace hopnet {

constexpr std::size_t omega_dim(std::size_t n) { return n * (n + 1) / 2; }

// Slot of pair (i, j), i != j, inside the weight block of omega.
std::size_t weight_slot(std::size_t n, std::size_t i, std::size_t j);
constexpr std::size_t bias_slot(std::size_t n, std::size_t j) { return n * (n - 1) / 2 + j; }

struct SparseVec {
  std::vector<std::size_t> index;  // strictly increasing
  std::vector<double> value;

  std::size_t nnz() const { return index.size(); }
  double dot(std::span<const double> dense) const;
  double dot(const SparseVec& other) const;
  double norm_sq() const;
  // dense += scale * this
  void axpy(double scale, std::span<double> dense) const;
  bool operator==(const SparseVec&) const = default;
};

// Layout [sqrt(2) * upper(W) | b].
class OmegaVec {
 public:
  OmegaVec() = default;
  explicit OmegaVec(std::size_t n) : n_(n), values_(omega_dim(n), 0.0) {}
  // Throws LayoutError unless values.size() = n(n+1)/2 for some n.
  static OmegaVec from_values(std::vector<double> values);

  std::size_t n() const { return n_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double norm_sq() const;
  double dot(const OmegaVec& other) const;
  bool operator==(const OmegaVec&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

OmegaVec theta_to_omega(const NetParams& p);
NetParams omega_to_theta(const OmegaVec& w);

// y_j(x) = 1 - 2 x_j.
inline double spin_sign(const Bits& x, std::size_t j) { return x[j] ? -1.0 : 1.0; }

// <u_j(x), omega> equals energy_gap(x, j, V omega).
SparseVec u_j(const Bits& x, std::size_t j);
SparseVec u_bar_sparse(const Bits& x);
std::vector<double> u_bar(const Bits& x);
// dense += scale * u_bar(x), without materializing u_bar.
void accumulate_u_bar(const Bits& x, double scale, std::span<double> dense);

}  // namespace hopnet
