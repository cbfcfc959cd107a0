#include "hopnet/learning_rules.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "hopnet/rng.hpp"

namespace hopnet {

std::string rule_name(Rule rule) {
  switch (rule) {
    case Rule::mef_gd: return "mef_gd";
    case Rule::mef_agd: return "mef_agd";
    case Rule::perceptron: return "perceptron";
    case Rule::delta: return "delta";
    case Rule::outer_product: return "outer_product";
  }
  return "unknown";
}

Rule parse_rule(std::string_view text) {
  for (Rule r : {Rule::mef_gd, Rule::mef_agd, Rule::perceptron, Rule::delta, Rule::outer_product}) {
    if (text == rule_name(r)) return r;
  }
  if (text == "mef") return Rule::mef_gd;
  throw ParseError("unknown rule '" + std::string(text) + "'");
}

namespace {

// Training data and a dense copy of theta with cached local fields.
class Model {
 public:
  Model(std::span<const Bits> S, const NetParams& init) : n_(init.n()), N_(S.size()) {
    supp_.resize(N_);
    y_.assign(N_ * n_, 1.0);
    for (std::size_t i = 0; i < N_; ++i) {
      if (S[i].size() != n_) {
        throw DimensionError("training state " + std::to_string(i) + " has length " +
                             std::to_string(S[i].size()) + ", expected " + std::to_string(n_));
      }
      for (std::size_t j = 0; j < n_; ++j) {
        if (S[i][j]) {
          supp_[i].push_back(static_cast<std::uint32_t>(j));
          y_[i * n_ + j] = -1.0;
        }
      }
    }
    w_.assign(init.weights().begin(), init.weights().end());
    b_.assign(init.biases().begin(), init.biases().end());
    h_.assign(N_ * n_, 0.0);
    refresh_fields();
  }

  std::size_t n() const { return n_; }
  std::size_t samples() const { return N_; }
  std::vector<double>& weights() { return w_; }
  std::vector<double>& bias() { return b_; }
  const std::vector<double>& fields() const { return h_; }
  std::vector<double>& mutable_fields() { return h_; }
  const std::vector<double>& signs() const { return y_; }
  const std::vector<std::uint32_t>& support(std::size_t i) const { return supp_[i]; }

  // h_i = b + sum over l in supp(x_i) of row l of W.
  void fields_of(const std::vector<double>& w, const std::vector<double>& b, std::vector<double>& out) const {
    out.resize(N_ * n_);
    for (std::size_t i = 0; i < N_; ++i) {
      double* h = out.data() + i * n_;
      std::copy(b.begin(), b.end(), h);
      for (auto l : supp_[i]) {
        const double* row = w.data() + static_cast<std::size_t>(l) * n_;
        for (std::size_t j = 0; j < n_; ++j) h[j] += row[j];
      }
    }
  }

  void refresh_fields() { fields_of(w_, b_, h_); }

  // Descent direction for per-(i, j) weights d: D_W = (A + A^T)/2 with
  // A[l][j] = sum over samples containing l of d_j, D_b = sum of d.
  void direction(const std::vector<double>& d, std::vector<double>& dw, std::vector<double>& db) const {
    dw.assign(n_ * n_, 0.0);
    db.assign(n_, 0.0);
    for (std::size_t i = 0; i < N_; ++i) {
      const double* di = d.data() + i * n_;
      for (std::size_t j = 0; j < n_; ++j) db[j] += di[j];
      for (auto l : supp_[i]) {
        double* row = dw.data() + static_cast<std::size_t>(l) * n_;
        for (std::size_t j = 0; j < n_; ++j) row[j] += di[j];
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      dw[i * n_ + i] = 0.0;
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double s = 0.5 * (dw[i * n_ + j] + dw[j * n_ + i]);
        dw[i * n_ + j] = s;
        dw[j * n_ + i] = s;
      }
    }
  }

  double min_gap() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < h_.size(); ++t) m = std::min(m, y_[t] * h_[t]);
    return h_.empty() ? 0.0 : m;
  }

  // Fraction of samples whose gaps all clear the margin (strictly when margin is 0).
  double margin_fraction(double margin) const {
    if (N_ == 0) return 1.0;
    std::size_t ok = 0;
    for (std::size_t i = 0; i < N_; ++i) {
      bool good = true;
      for (std::size_t j = 0; j < n_ && good; ++j) {
        const double g = y_[i * n_ + j] * h_[i * n_ + j];
        good = margin == 0.0 ? g > 0.0 : g >= margin;
      }
      ok += good;
    }
    return static_cast<double>(ok) / static_cast<double>(N_);
  }

  NetParams params() const {
    // w_ is kept symmetric with a zero diagonal by construction of every update.
    return NetParams::from_dense(n_, w_, b_);
  }

 private:
  std::size_t n_;
  std::size_t N_;
  std::vector<std::vector<std::uint32_t>> supp_;
  std::vector<double> y_;
  std::vector<double> w_;
  std::vector<double> b_;
  std::vector<double> h_;
};

struct LossEval {
  double loss = 0.0;
  bool saturated = false;
};

// MEF terms from fields h; fills c = exp(-gap) when requested.
LossEval mef_terms(const std::vector<double>& h, const std::vector<double>& y, std::vector<double>* c) {
  LossEval out;
  if (c) c->resize(h.size());
  for (std::size_t t = 0; t < h.size(); ++t) {
    double e = -y[t] * h[t];
    if (e > kExpClamp) {
      e = kExpClamp;
      out.saturated = true;
    }
    const double v = std::exp(e);
    out.loss += v;
    if (c) (*c)[t] = v;
  }
  return out;
}

double l2_norm(const std::vector<double>& dw, const std::vector<double>& db) {
  double s = 0.0;
  for (double v : dw) s += v * v;
  for (double v : db) s += v * v;
  return std::sqrt(s);
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void check_finite(double loss, int iter) {
  if (!std::isfinite(loss)) {
    throw DivergenceError("non-finite loss at iteration " + std::to_string(iter));
  }
}

constexpr int kMaxHalvings = 200;
constexpr int kFieldRefresh = 256;

using Observer = std::function<void(long iter, const Model& model, double loss)>;

struct RunState {
  int iterations = 0;
  double loss = 0.0;
  bool saturated = false;
  double step = 0.0;
  bool margin_reached = false;
};

void push_trace(TrainResult& result, const TrainConfig& cfg, int iter, double loss, const Model& model,
                double grad_norm) {
  if (!cfg.record_trace) return;
  result.trace.push_back({iter, loss, model.margin_fraction(cfg.margin_target), grad_norm});
}

bool margin_met(const Model& model, const TrainConfig& cfg) {
  const double g = model.min_gap();
  return cfg.margin_target == 0.0 ? g > 0.0 : g >= cfg.margin_target;
}

// Gradient descent (plain or Nesterov) on the MEF loss with step halving.
RunState run_mef(Model& model, const TrainConfig& cfg, bool accelerated, TrainResult& result,
                 const Observer& observe) {
  RunState st;
  const std::size_t n = model.n();
  st.step = cfg.step_size > 0.0 ? cfg.step_size
                                : 0.1 / (static_cast<double>(n) * static_cast<double>(model.samples()));
  std::vector<double> c;
  LossEval cur = mef_terms(model.fields(), model.signs(), &c);
  check_finite(cur.loss, 0);
  st.saturated = cur.saturated;
  push_trace(result, cfg, 0, cur.loss, model, 0.0);
  if (observe) observe(0, model, cur.loss);

  std::vector<double> d(c.size()), dw, db, hd, h_try, c_try;
  // Momentum state: previous iterate and its fields.
  std::vector<double> w_prev, b_prev, h_prev;
  std::vector<double> w_y, b_y, h_y;
  long t_momentum = 1;
  if (accelerated) {
    w_prev = model.weights();
    b_prev = model.bias();
    h_prev = model.fields();
  }

  for (int it = 1; it <= cfg.max_iters; ++it) {
    if (cfg.stop_at_margin && margin_met(model, cfg)) {
      st.margin_reached = true;
      break;
    }
    if (cfg.stop_tol > 0.0 && cur.loss < cfg.stop_tol) break;

    // Base point: the current iterate, or the extrapolated one.
    const std::vector<double>* hb = &model.fields();
    const std::vector<double>* wb = &model.weights();
    const std::vector<double>* bb = &model.bias();
    LossEval base = cur;
    double mu = 0.0;
    if (accelerated && t_momentum > 1) {
      mu = static_cast<double>(t_momentum - 1) / static_cast<double>(t_momentum + 2);
      auto extrapolate = [mu](const std::vector<double>& x, const std::vector<double>& xp,
                              std::vector<double>& out) {
        out.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + mu * (x[i] - xp[i]);
      };
      extrapolate(model.weights(), w_prev, w_y);
      extrapolate(model.bias(), b_prev, b_y);
      extrapolate(model.fields(), h_prev, h_y);
      for (std::size_t i = 0; i < n; ++i) w_y[i * n + i] = 0.0;
      hb = &h_y;
      wb = &w_y;
      bb = &b_y;
      base = mef_terms(h_y, model.signs(), &c);
      check_finite(base.loss, it);
    }

    for (std::size_t s = 0; s < c.size(); ++s) d[s] = c[s] * model.signs()[s];
    model.direction(d, dw, db);
    const double gnorm = l2_norm(dw, db);
    if (gnorm == 0.0) break;
    model.fields_of(dw, db, hd);

    double step = st.step;
    LossEval next;
    int halvings = 0;
    for (;;) {
      h_try = *hb;
      axpy(step, hd, h_try);
      next = mef_terms(h_try, model.signs(), &c_try);
      if (std::isfinite(next.loss) && next.loss <= base.loss) break;
      if (++halvings > kMaxHalvings) break;
      step *= 0.5;
    }
    if (halvings > kMaxHalvings) break;  // no descent possible at machine precision
    st.step = step;

    if (accelerated && next.loss > cur.loss) {
      // Restart the momentum and retry from the current iterate next round.
      t_momentum = 1;
      w_prev = model.weights();
      b_prev = model.bias();
      h_prev = model.fields();
      cur = mef_terms(model.fields(), model.signs(), &c);
      --it;
      continue;
    }

    if (accelerated) {
      w_prev = model.weights();
      b_prev = model.bias();
      h_prev = model.fields();
    }
    std::vector<double>& w = model.weights();
    std::vector<double>& b = model.bias();
    if (wb != &w) {
      w = *wb;
      b = *bb;
    }
    axpy(step, dw, w);
    axpy(step, db, b);
    model.mutable_fields().swap(h_try);
    c.swap(c_try);
    cur = next;
    ++t_momentum;

    if (it % kFieldRefresh == 0) {
      model.refresh_fields();
      cur = mef_terms(model.fields(), model.signs(), &c);
    }
    check_finite(cur.loss, it);
    st.saturated = st.saturated || cur.saturated;
    st.iterations = it;
    push_trace(result, cfg, it, cur.loss, model, gnorm);
    if (observe) observe(it, model, cur.loss);
  }
  model.refresh_fields();
  st.loss = mef_terms(model.fields(), model.signs(), nullptr).loss;
  st.margin_reached = margin_met(model, cfg);
  return st;
}

double delta_loss(const Model& model, const std::vector<double>& h, double target) {
  double s = 0.0;
  for (std::size_t t = 0; t < h.size(); ++t) {
    const double r = target - model.signs()[t] * h[t];
    s += r * r;
  }
  return s;
}

// Least squares on the functional margins, steepest descent with exact line
// search unless a fixed step is configured.
RunState run_delta(Model& model, const TrainConfig& cfg, TrainResult& result) {
  RunState st;
  const double target = cfg.margin_target;
  double loss = delta_loss(model, model.fields(), target);
  check_finite(loss, 0);
  push_trace(result, cfg, 0, loss, model, 0.0);
  std::vector<double> d(model.fields().size()), dw, db, hd, h_try;
  st.step = cfg.step_size;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    if (cfg.stop_at_margin && margin_met(model, cfg)) {
      st.margin_reached = true;
      break;
    }
    if (cfg.stop_tol > 0.0 && loss < cfg.stop_tol) break;
    const auto& h = model.fields();
    const auto& y = model.signs();
    for (std::size_t t = 0; t < h.size(); ++t) d[t] = 2.0 * (target - y[t] * h[t]) * y[t];
    model.direction(d, dw, db);
    const double gnorm = l2_norm(dw, db);
    if (gnorm == 0.0) break;
    model.fields_of(dw, db, hd);
    double step = 0.0;
    if (cfg.step_size > 0.0) {
      step = st.step;
      int halvings = 0;
      for (;;) {
        h_try = h;
        axpy(step, hd, h_try);
        if (delta_loss(model, h_try, target) <= loss || ++halvings > kMaxHalvings) break;
        step *= 0.5;
      }
      st.step = step;
    } else {
      // Along the direction the residual is r - step * y.hd, so the minimizer is closed form.
      double num = 0.0;
      double den = 0.0;
      for (std::size_t t = 0; t < h.size(); ++t) {
        const double r = target - y[t] * h[t];
        const double g = y[t] * hd[t];
        num += r * g;
        den += g * g;
      }
      if (den <= 0.0) break;
      step = num / den;
      st.step = step;
    }
    axpy(step, dw, model.weights());
    axpy(step, db, model.bias());
    axpy(step, hd, model.mutable_fields());
    if (it % kFieldRefresh == 0) model.refresh_fields();
    loss = delta_loss(model, model.fields(), target);
    check_finite(loss, it);
    st.iterations = it;
    push_trace(result, cfg, it, loss, model, gnorm);
  }
  model.refresh_fields();
  st.loss = delta_loss(model, model.fields(), target);
  st.margin_reached = margin_met(model, cfg);
  return st;
}

// Error-driven rule: a_j = 1(h_j < 0), e_j = x_j - a_j, row update then symmetrization.
RunState run_perceptron(Model& model, std::span<const Bits> S, const TrainConfig& cfg, TrainResult& result) {
  RunState st;
  const std::size_t n = model.n();
  const double eta = cfg.step_size > 0.0 ? cfg.step_size : 1.0;
  st.step = eta;
  std::vector<double>& w = model.weights();
  std::vector<double>& b = model.bias();
  std::vector<std::size_t> order(S.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(cfg.seed, "perceptron-order", {}));
  std::vector<double> h(n), e(n);
  push_trace(result, cfg, 0, 0.0, model, 0.0);
  for (int epoch = 1; epoch <= cfg.max_iters; ++epoch) {
    if (cfg.stop_at_margin && margin_met(model, cfg)) {
      st.margin_reached = true;
      break;
    }
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
    long errors = 0;
    double update_sq = 0.0;
    for (std::size_t i : order) {
      const auto& supp = model.support(i);
      std::copy(b.begin(), b.end(), h.begin());
      for (auto l : supp) {
        const double* row = w.data() + static_cast<std::size_t>(l) * n;
        for (std::size_t j = 0; j < n; ++j) h[j] += row[j];
      }
      bool any = false;
      for (std::size_t j = 0; j < n; ++j) {
        const double a = h[j] < 0.0 ? 1.0 : 0.0;
        e[j] = static_cast<double>(S[i][j]) - a;
        if (e[j] != 0.0) {
          any = true;
          ++errors;
        }
      }
      if (!any) continue;
      // W -= eta/2 (e x^T + x e^T), b -= eta e.
      const double half = 0.5 * eta;
      for (auto l : supp) {
        double* row = w.data() + static_cast<std::size_t>(l) * n;
        for (std::size_t j = 0; j < n; ++j) {
          if (e[j] == 0.0) continue;
          row[j] -= half * e[j];
          w[j * n + l] -= half * e[j];
        }
      }
      for (auto l : supp) w[static_cast<std::size_t>(l) * n + l] = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (e[j] != 0.0) w[j * n + j] = 0.0;
        b[j] -= eta * e[j];
        update_sq += eta * eta * e[j] * e[j];
      }
    }
    model.refresh_fields();
    st.iterations = epoch;
    push_trace(result, cfg, epoch, static_cast<double>(errors), model, std::sqrt(update_sq));
    st.loss = static_cast<double>(errors);
    if (errors == 0) break;
  }
  st.margin_reached = margin_met(model, cfg);
  return st;
}

NetParams initial_params(std::size_t n, const TrainConfig& cfg, const std::optional<NetParams>& init) {
  if (init) {
    if (init->n() != n) throw DimensionError("initial parameters do not match the data dimension");
    return *init;
  }
  NetParams p(n);
  if (cfg.init_scale > 0.0) {
    Rng rng(derive_seed(cfg.seed, "init", {n}));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) p.set_weight(i, j, cfg.init_scale * rng.normal());
    }
    for (std::size_t j = 0; j < n; ++j) p.set_bias(j, cfg.init_scale * rng.normal());
  }
  return p;
}

void validate(std::span<const Bits> S, const TrainConfig& cfg) {
  if (S.empty()) throw PreconditionError("training set is empty");
  if (cfg.max_iters < 1) throw PreconditionError("max_iters must be at least 1");
  if (cfg.step_size < 0.0) throw PreconditionError("step_size must be positive");
  if (cfg.margin_target < 0.0) throw PreconditionError("margin_target must be non-negative");
  for (const auto& x : S) {
    if (x.size() != S.front().size()) throw DimensionError("training states differ in length");
  }
}

}  // namespace

LossValue mef_loss(const NetParams& p, std::span<const Bits> S) {
  if (S.empty()) throw PreconditionError("mef_loss needs a nonempty set");
  Model model(S, p);
  auto e = mef_terms(model.fields(), model.signs(), nullptr);
  return {e.loss, e.saturated};
}

MefGradient mef_gradient(const NetParams& p, std::span<const Bits> S) {
  if (S.empty()) throw PreconditionError("mef_gradient needs a nonempty set");
  Model model(S, p);
  std::vector<double> c;
  auto e = mef_terms(model.fields(), model.signs(), &c);
  for (std::size_t t = 0; t < c.size(); ++t) c[t] *= model.signs()[t];
  std::vector<double> dw, db;
  model.direction(c, dw, db);
  for (double& v : dw) v = -v;
  for (double& v : db) v = -v;
  MefGradient g;
  g.theta = NetParams::from_dense(p.n(), std::move(dw), std::move(db));
  g.omega = theta_to_omega(g.theta);
  g.saturated = e.saturated;
  return g;
}

TrainResult train(std::span<const Bits> S, const TrainConfig& cfg, const std::optional<NetParams>& init) {
  validate(S, cfg);
  const std::size_t n = S.front().size();
  TrainResult result;

  if (cfg.rule == Rule::outer_product) {
    NetParams p(n);
    const double scale = -1.0 / static_cast<double>(S.size());
    std::vector<double> w(n * n, 0.0);
    for (const auto& x : S) {
      if (x.size() != n) throw DimensionError("training states differ in length");
      for (std::size_t i = 0; i < n; ++i) {
        const double si = x[i] ? 1.0 : -1.0;
        for (std::size_t j = i + 1; j < n; ++j) w[i * n + j] += si * (x[j] ? 1.0 : -1.0);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) p.set_weight(i, j, scale * w[i * n + j]);
    }
    Model model(S, p);
    result.params = std::move(p);
    result.iterations = 1;
    result.min_margin = model.min_gap();
    result.margin_reached = margin_met(model, cfg);
    result.final_loss = mef_terms(model.fields(), model.signs(), nullptr).loss;
    push_trace(result, cfg, 1, result.final_loss, model, 0.0);
    return result;
  }

  Model model(S, initial_params(n, cfg, init));
  RunState st;
  switch (cfg.rule) {
    case Rule::mef_gd: st = run_mef(model, cfg, false, result, {}); break;
    case Rule::mef_agd: st = run_mef(model, cfg, true, result, {}); break;
    case Rule::delta: st = run_delta(model, cfg, result); break;
    case Rule::perceptron: st = run_perceptron(model, S, cfg, result); break;
    case Rule::outer_product: break;
  }
  result.params = model.params();
  result.iterations = st.iterations;
  result.margin_reached = st.margin_reached;
  result.saturated = st.saturated;
  result.final_loss = st.loss;
  result.min_margin = model.min_gap();
  result.step_size = st.step;
  return result;
}

std::vector<MefPathPoint> mef_gd_path(std::span<const Bits> S, std::span<const long> checkpoints,
                                      double step_size) {
  if (S.empty()) throw PreconditionError("training set is empty");
  if (checkpoints.empty()) return {};
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw PreconditionError("checkpoints must be sorted");
  }
  const long last = checkpoints.back();
  if (last > std::numeric_limits<int>::max()) throw PreconditionError("checkpoint too large");
  TrainConfig cfg;
  cfg.rule = Rule::mef_gd;
  cfg.step_size = step_size;
  cfg.max_iters = static_cast<int>(std::max<long>(1, last));
  cfg.stop_at_margin = false;
  cfg.record_trace = false;
  std::vector<MefPathPoint> path;
  std::size_t next = 0;
  Observer observe = [&](long iter, const Model& model, double loss) {
    while (next < checkpoints.size() && checkpoints[next] == iter) {
      path.push_back({iter, model.params(), loss});
      ++next;
    }
  };
  TrainResult scratch;
  Model model(S, NetParams(S.front().size()));
  run_mef(model, cfg, false, scratch, observe);
  // A stalled run keeps its final iterate for the remaining checkpoints.
  while (next < checkpoints.size()) {
    path.push_back({checkpoints[next], model.params(), mef_terms(model.fields(), model.signs(), nullptr).loss});
    ++next;
  }
  return path;
}

double directional_alignment(const NetParams& p, const OmegaVec& ref) {
  const OmegaVec w = theta_to_omega(p);
  if (w.size() != ref.size()) throw DimensionError("alignment between vectors of different length");
  const double nw = w.norm_sq();
  const double nr = ref.norm_sq();
  if (nw == 0.0 || nr == 0.0) throw DirectionError("alignment with a zero vector is undefined");
  return std::clamp(w.dot(ref) / std::sqrt(nw * nr), -1.0, 1.0);
}

}  // namespace hopnet
