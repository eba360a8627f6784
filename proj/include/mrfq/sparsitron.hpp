#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "mrfq/errors.hpp"
#include "mrfq/sampler.hpp"

namespace mrfq {

// One example of the learning problem: features in [-1,1]^N, label in {0,1}.
struct LabeledExample {
  std::vector<double> x;
  int y = 0;
};

// Row access for the online pass. Training rows are requested exactly once,
// at their step; validation rows are cached up front.
class SparsitronData {
 public:
  virtual ~SparsitronData() = default;
  virtual std::size_t dimension() const = 0;
  virtual std::size_t count() const = 0;
  virtual void load(std::size_t i, std::span<double> out) const = 0;
  virtual double label(std::size_t i) const = 0;
};

class VectorData final : public SparsitronData {
 public:
  explicit VectorData(std::vector<LabeledExample> examples)
      : examples_(std::move(examples)) {
    for (const LabeledExample& e : examples_) {
      if (e.x.size() != examples_.front().x.size()) {
        throw InvalidInput("examples must share one dimension");
      }
      for (double v : e.x) {
        if (!(std::abs(v) <= 1.0)) throw InvalidInput("features must lie in [-1,1]");
      }
      if (e.y != 0 && e.y != 1) throw InvalidInput("labels must be 0 or 1");
    }
  }

  std::size_t dimension() const override {
    return examples_.empty() ? 0 : examples_.front().x.size();
  }
  std::size_t count() const override { return examples_.size(); }
  void load(std::size_t i, std::span<double> out) const override {
    const auto& x = examples_[i].x;
    std::copy(x.begin(), x.end(), out.begin());
  }
  double label(std::size_t i) const override { return examples_[i].y; }

 private:
  std::vector<LabeledExample> examples_;
};

struct SparsitronOptions {
  // Any 1-Lipschitz non-decreasing transfer; sigmoid when unset.
  std::function<double(double)> sigma;
  bool store_alpha_trace = false;
};

// Perturbation hooks for the oracle-noise simulation of the quantum variant.
// The training hook feeds back into the weight trajectory.
struct SparsitronHooks {
  std::function<double(double h, std::size_t t)> perturb_train;
  std::function<double(double z, std::size_t t, std::size_t m)> perturb_val;
};

struct SparsitronRun {
  std::vector<double> v;      // lambda * alpha^{(t_star)}
  std::size_t t_star = 0;     // 0-based selected iteration
  std::vector<double> risks;  // empirical risk per iteration
  std::vector<double> h;      // per-step inner products, after perturbation
  // 1-norm of the weight vector under all-ones initialization at t_star;
  // this is the normalizer of the coefficient-reconstruction identity.
  double gamma_allones = 0.0;
  double beta = 0.0;
  bool beta_clamped = false;
  std::vector<std::vector<double>> alpha_trace;
};

// Spec-facing result type.
struct SparsitronResult {
  std::vector<double> v;
  std::size_t t_star = 0;
  std::vector<double> risks;
  std::vector<std::vector<double>> alpha_trace;
};

namespace detail {

// beta^l for l in {(1+g)/2, (1-g)/2, 1/2} covers the +-1/0 feature fast path.
struct BetaPowers {
  double beta, plus, minus, half, g;
  BetaPowers(double beta_in, double g_in) : beta(beta_in), g(g_in) {
    plus = std::pow(beta, 0.5 * (1.0 + g));
    minus = std::pow(beta, 0.5 * (1.0 - g));
    half = std::pow(beta, 0.5);
  }
  double factor(double x) const {
    if (x == 1.0) return plus;
    if (x == -1.0) return minus;
    if (x == 0.0) return half;
    return std::pow(beta, 0.5 * (1.0 + g * x));
  }
};

}  // namespace detail

// Multiplicative-weights online learner. One pass over the training prefix:
//   beta = 1 - sqrt(log2(N) / T), weights start uniform,
//   l^(t) = (1 + (sigma(lambda alpha.x) - y) x) / 2,  w <- w * beta^l,
// then the iterate with the least empirical risk on the M held-out examples
// wins. Weights are renormalized each step; the all-ones-scale norm is
// tracked in log space so long runs cannot underflow.
inline SparsitronRun run_sparsitron(std::size_t T, std::size_t M, double lambda,
                                    const SparsitronData& data,
                                    const SparsitronOptions& opts = {},
                                    const SparsitronHooks& hooks = {}) {
  if (lambda <= 0.0) throw InvalidInput("lambda must be positive");
  if (T < 2) throw InvalidInput("need at least two training rounds");
  if (data.count() != T + M) {
    throw InvalidInput("data length must equal T + M");
  }
  const std::size_t N = data.dimension();
  if (N == 0) throw InvalidInput("empty feature space");
  const auto sigma = opts.sigma ? opts.sigma
                                : std::function<double(double)>(
                                      [](double x) { return sigmoid(x); });

  SparsitronRun run;
  run.beta = 1.0 - std::sqrt(std::log2(static_cast<double>(N)) /
                             static_cast<double>(T));
  if (!(run.beta > 0.0)) {  // degenerate T <= log2(N); outside the theorem
    run.beta = 0.5;
    run.beta_clamped = true;
  }
  const double beta = run.beta;

  // Validation rows cached up front; training rows streamed at their step.
  std::vector<double> val(M * N);
  std::vector<double> val_y(M);
  for (std::size_t m = 0; m < M; ++m) {
    data.load(T + m, std::span<double>(val.data() + m * N, N));
    val_y[m] = data.label(T + m);
  }

  std::vector<double> alpha(N, 1.0 / static_cast<double>(N));
  std::vector<double> alpha_snapshots(T * N);
  std::vector<double> log_norm(T, 0.0);  // log ||w^(t)||_1 up to +log N
  double log_norm_acc = 0.0;

  std::vector<double> x(N);
  run.h.resize(T);
  if (opts.store_alpha_trace) run.alpha_trace.reserve(T);

  for (std::size_t t = 0; t < T; ++t) {
    std::copy(alpha.begin(), alpha.end(),
              alpha_snapshots.begin() + static_cast<std::ptrdiff_t>(t * N));
    log_norm[t] = log_norm_acc;
    if (opts.store_alpha_trace) run.alpha_trace.push_back(alpha);

    data.load(t, x);
    const double y = data.label(t);
    double dot = 0.0;
    for (std::size_t j = 0; j < N; ++j) dot += alpha[j] * x[j];
    double h = hooks.perturb_train ? hooks.perturb_train(dot, t) : dot;
    run.h[t] = h;

    const double g = sigma(lambda * h) - y;
    detail::BetaPowers pows(beta, g);
    double norm = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      alpha[j] *= pows.factor(x[j]);
      norm += alpha[j];
    }
    const double inv = 1.0 / norm;
    for (std::size_t j = 0; j < N; ++j) alpha[j] *= inv;
    log_norm_acc += std::log(norm);
  }

  // Empirical risks for every iterate over the held-out block.
  run.risks.assign(T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    const double* a = alpha_snapshots.data() + t * N;
    double risk = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      const double* xv = val.data() + m * N;
      double dot = 0.0;
      for (std::size_t j = 0; j < N; ++j) dot += a[j] * xv[j];
      double z = hooks.perturb_val ? hooks.perturb_val(dot, t, m) : dot;
      double diff = sigma(lambda * z) - val_y[m];
      risk += diff * diff;
    }
    run.risks[t] = M ? risk / static_cast<double>(M) : 0.0;
  }

  run.t_star = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < T; ++t) {
    if (run.risks[t] < best) {  // ties break to the smallest t
      best = run.risks[t];
      run.t_star = t;
    }
  }

  run.v.assign(alpha_snapshots.begin() + static_cast<std::ptrdiff_t>(run.t_star * N),
               alpha_snapshots.begin() + static_cast<std::ptrdiff_t>((run.t_star + 1) * N));
  for (double& vj : run.v) vj *= lambda;
  run.gamma_allones =
      static_cast<double>(N) * std::exp(log_norm[run.t_star]);
  return run;
}

inline SparsitronResult sparsitron(std::size_t T, std::size_t M, double lambda,
                                   const std::vector<LabeledExample>& data,
                                   const SparsitronOptions& opts = {}) {
  VectorData wrapped(data);
  SparsitronRun run = run_sparsitron(T, M, lambda, wrapped, opts);
  return SparsitronResult{std::move(run.v), run.t_star, std::move(run.risks),
                          std::move(run.alpha_trace)};
}

// x -> (x, -x, 0): the enlargement that lets the nonnegative multiplicative
// update represent signed weight vectors.
inline std::vector<double> enlarge(std::span<const double> x) {
  std::vector<double> out;
  out.reserve(2 * x.size() + 1);
  out.insert(out.end(), x.begin(), x.end());
  for (double v : x) out.push_back(-v);
  out.push_back(0.0);
  return out;
}

// Inverse on the weight side: first half minus second half. The trailing
// coordinate is dropped; ||fold(v)||_1 <= ||v||_1.
inline std::vector<double> fold(std::span<const double> v_tilde) {
  if (v_tilde.size() % 2 != 1) {
    throw InvalidInput("enlarged vector must have odd length 2N+1");
  }
  for (double v : v_tilde) {
    if (v < 0.0) throw InvalidInput("enlarged weights must be nonnegative");
  }
  std::size_t half = v_tilde.size() / 2;
  std::vector<double> out(half);
  for (std::size_t j = 0; j < half; ++j) out[j] = v_tilde[j] - v_tilde[half + j];
  return out;
}

}  // namespace mrfq
