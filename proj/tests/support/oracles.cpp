#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

namespace oracle {

namespace {

std::vector<std::pair<int, int>> lex_pairs(int v) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < v; ++a) {
    for (int b = a + 1; b < v; ++b) out.emplace_back(a, b);
  }
  return out;
}

// Lawson-Hanson non-negative least squares.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index m = A.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  std::vector<bool> passive(m, false);
  const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff());
  for (int outer = 0; outer < 10 * static_cast<int>(m) + 100; ++outer) {
    const Eigen::VectorXd w = A.transpose() * (b - A * x);
    Eigen::Index best = -1;
    double best_val = tol;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!passive[j] && w[j] > best_val) {
        best_val = w[j];
        best = j;
      }
    }
    if (best < 0) break;
    passive[best] = true;
    for (int inner = 0; inner < 10 * static_cast<int>(m) + 100; ++inner) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[j]) idx.push_back(j);
      }
      Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
      for (std::size_t c = 0; c < idx.size(); ++c) Ap.col(static_cast<Eigen::Index>(c)) = A.col(idx[c]);
      const Eigen::VectorXd zp = Ap.completeOrthogonalDecomposition().solve(b);
      Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
      for (std::size_t c = 0; c < idx.size(); ++c) z[idx[c]] = zp[static_cast<Eigen::Index>(c)];
      bool positive = true;
      for (Eigen::Index j : idx) positive = positive && z[j] > 0.0;
      if (positive) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j : idx) {
        if (z[j] <= 0.0) alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      }
      x += alpha * (z - x);
      for (Eigen::Index j : idx) {
        if (x[j] <= tol) {
          x[j] = 0.0;
          passive[j] = false;
        }
      }
    }
  }
  return x;
}

}  // namespace

double energy(const Bits& x, const NetParams& p) {
  const std::size_t n = x.size();
  long double e = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    if (!x[i]) continue;
    e += p.bias(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (x[j]) e += 0.5L * p.weight(i, j);
    }
  }
  return static_cast<double>(e);
}

double two_energy_gap(const Bits& x, std::size_t j, const NetParams& p) {
  Bits y = x;
  y[j] ^= 1;
  return oracle::energy(y, p) - oracle::energy(x, p);
}

double mef_loss(const NetParams& p, const std::vector<Bits>& S) {
  double total = 0.0;
  for (const auto& x : S) {
    for (std::size_t j = 0; j < x.size(); ++j) total += std::exp(-oracle::two_energy_gap(x, j, p));
  }
  return total;
}

NetParams finite_difference_gradient(const NetParams& p, const std::vector<Bits>& S, double h) {
  const std::size_t n = p.n();
  NetParams g(n);
  auto shifted = [&](std::size_t i, std::size_t j, double d) {
    NetParams q = p;
    if (i == j) {
      q.set_bias(i, p.bias(i) + d);
    } else {
      q.set_weight(i, j, p.weight(i, j) + d);
    }
    return mef_loss(q, S);
  };
  for (std::size_t i = 0; i < n; ++i) {
    g.set_bias(i, (shifted(i, i, h) - shifted(i, i, -h)) / (2 * h));
    for (std::size_t j = i + 1; j < n; ++j) {
      // Moving the pair together changes the loss by twice the per-entry derivative.
      g.set_weight(i, j, (shifted(i, j, h) - shifted(i, j, -h)) / (4 * h));
    }
  }
  return g;
}

QpSolution min_norm_active_set(const std::vector<std::vector<double>>& rows) {
  // Least-distance programming through NNLS: min ||E u - f||, u >= 0 with
  // E = [G^T; h^T], f = e_{q+1}; then w = -r_{1..q} / r_{q+1}.
  QpSolution out;
  if (rows.empty()) return out;
  const auto M = static_cast<Eigen::Index>(rows.size());
  const auto q = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd E(q + 1, M);
  for (Eigen::Index c = 0; c < M; ++c) {
    for (Eigen::Index t = 0; t < q; ++t) E(t, c) = rows[c][t];
    E(q, c) = 1.0;
  }
  Eigen::VectorXd f = Eigen::VectorXd::Zero(q + 1);
  f[q] = 1.0;
  const Eigen::VectorXd u = nnls(E, f);
  const Eigen::VectorXd r = E * u - f;
  if (std::abs(r[q]) < 1e-14) return out;
  out.feasible = true;
  out.w.resize(q);
  for (Eigen::Index t = 0; t < q; ++t) out.w[t] = -r[t] / r[q];
  out.alpha.resize(M);
  for (Eigen::Index c = 0; c < M; ++c) out.alpha[c] = u[c] / -r[q];
  out.norm_sq = 0.0;
  for (double x : out.w) out.norm_sq += x * x;
  return out;
}

QpSolution min_norm_exhaustive(const std::vector<std::vector<double>>& rows, std::size_t max_active) {
  QpSolution best;
  const std::size_t M = rows.size();
  if (M == 0) return best;
  const auto q = static_cast<Eigen::Index>(rows.front().size());
  best.norm_sq = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> subset;
  std::function<void(std::size_t)> visit = [&](std::size_t start) {
    if (!subset.empty()) {
      Eigen::MatrixXd U(static_cast<Eigen::Index>(subset.size()), q);
      for (std::size_t r = 0; r < subset.size(); ++r) {
        for (Eigen::Index t = 0; t < q; ++t) U(static_cast<Eigen::Index>(r), t) = rows[subset[r]][t];
      }
      const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(subset.size()));
      const Eigen::VectorXd w = U.completeOrthogonalDecomposition().solve(ones);
      if ((U * w - ones).norm() < 1e-9) {
        bool ok = true;
        for (std::size_t c = 0; c < M && ok; ++c) {
          double s = 0.0;
          for (Eigen::Index t = 0; t < q; ++t) s += rows[c][t] * w[t];
          ok = s >= 1.0 - 1e-9;
        }
        if (ok && w.squaredNorm() < best.norm_sq) {
          best.norm_sq = w.squaredNorm();
          best.w.assign(w.data(), w.data() + q);
          best.feasible = true;
        }
      }
    }
    if (subset.size() == max_active) return;
    for (std::size_t c = start; c < M; ++c) {
      subset.push_back(c);
      visit(c + 1);
      subset.pop_back();
    }
  };
  visit(0);
  if (!best.feasible) best.norm_sq = 0.0;
  return best;
}

std::vector<std::vector<double>> dense_constraints(const std::vector<Bits>& S) {
  std::vector<std::vector<double>> rows;
  if (S.empty()) return rows;
  const std::size_t n = S.front().size();
  const std::size_t p = n * (n - 1) / 2;
  const std::size_t q = p + n;
  // Unit omega vectors in theta form: weight slots carry 1/sqrt(2).
  std::vector<NetParams> basis;
  std::size_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++t) {
      NetParams e(n);
      e.set_weight(i, j, 1.0 / std::sqrt(2.0));
      basis.push_back(e);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    NetParams e(n);
    e.set_bias(j, 1.0);
    basis.push_back(e);
  }
  std::set<std::vector<double>> seen;
  for (const auto& x : S) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> row(q);
      for (std::size_t c = 0; c < q; ++c) row[c] = oracle::two_energy_gap(x, j, basis[c]);
      if (seen.insert(row).second) rows.push_back(row);
    }
  }
  return rows;
}

std::vector<std::array<double, 3>> invariant_constraint_rows(const std::vector<Bits>& S, int v) {
  const auto pairs = lex_pairs(v);
  std::set<std::array<double, 3>> rows;
  for (const auto& x : S) {
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      double adj = 0.0, non = 0.0;
      for (std::size_t l = 0; l < pairs.size(); ++l) {
        if (l == j || !x[l]) continue;
        const auto [a, b] = pairs[j];
        const auto [c, d] = pairs[l];
        const int shared = (a == c) + (a == d) + (b == c) + (b == d);
        (shared == 1 ? adj : non) += 1.0;
      }
      const double y = x[j] ? -1.0 : 1.0;
      rows.insert({y * adj, y * non, y});
    }
  }
  return {rows.begin(), rows.end()};
}

double chi_square_uniform(const std::vector<long>& counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (long c : counts) stat += (c - expected) * (c - expected) / expected;
  return stat;
}

double chi_square_quantile(int dof, double upper_tail) {
  // Normal upper quantile by bisection on erfc.
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(mid / std::sqrt(2.0)) > upper_tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double z = 0.5 * (lo + hi);
  const double k = dof;
  const double c = 2.0 / (9.0 * k);
  return k * std::pow(1.0 - c + z * std::sqrt(c), 3);
}

std::vector<Bits> naive_orbit(const hopnet::EdgeGraph& base) {
  const int v = base.vertices();
  const auto pairs = lex_pairs(v);
  std::vector<std::vector<int>> adj(v, std::vector<int>(v, 0));
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    adj[pairs[j].first][pairs[j].second] = adj[pairs[j].second][pairs[j].first] = base.bits()[j];
  }
  std::vector<int> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  std::set<Bits> out;
  do {
    Bits x(pairs.size());
    for (std::size_t j = 0; j < pairs.size(); ++j) x[j] = adj[perm[pairs[j].first]][perm[pairs[j].second]];
    out.insert(x);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {out.begin(), out.end()};
}

bool naive_isomorphic(const hopnet::EdgeGraph& a, const hopnet::EdgeGraph& b) {
  if (a.vertices() != b.vertices()) return false;
  const auto orbit = naive_orbit(a);
  return std::binary_search(orbit.begin(), orbit.end(), b.bits());
}

}  // namespace oracle
