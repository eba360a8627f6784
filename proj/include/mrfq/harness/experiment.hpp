#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mrfq/errors.hpp"
#include "mrfq/harness/generate.hpp"
#include "mrfq/parallel.hpp"
#include "mrfq/qsim/quantum_learn.hpp"
#include "mrfq/rng.hpp"
#include "mrfq/sampler.hpp"
#include "mrfq/struct_learn.hpp"

namespace mrfq {

struct ExperimentConfig {
  int n = 8;
  int r = 3;
  int d = 3;
  double eta = 0.4;
  double lambda = 2.0;
  std::size_t T = 0;  // 0 together with M = 0 means auto sizing
  std::size_t M = 0;
  double rho = 0.1;
  int trials = 20;
  std::uint64_t seed = 1;
  std::string method = "classical";  // classical | qsim | both
  std::string noise = "zero";
  std::string sampler = "auto";  // exact | gibbs | auto
  double target_rate = 0.9;
  std::size_t auto_floor = 512;
  std::size_t auto_cap = std::size_t{1} << 17;
  unsigned threads = 2;
  bool planted = true;  // planted fixtures vs fully random models

  bool auto_samples() const { return T == 0 && M == 0; }

  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    if (r > d + 1) {
      out.push_back("r > d + 1: an r-clique needs vertex degree r-1");
    }
    if (lambda > 2.0) {
      out.push_back("lambda > 2: Gibbs thinning defaults are unvalidated here");
    }
    return out;
  }
};

inline void from_json_config(const nlohmann::json& j, ExperimentConfig& cfg) {
  cfg.n = j.value("n", cfg.n);
  cfg.r = j.value("r", cfg.r);
  cfg.d = j.value("d", cfg.d);
  cfg.eta = j.value("eta", cfg.eta);
  cfg.lambda = j.value("lambda", cfg.lambda);
  cfg.T = j.value("T", cfg.T);
  cfg.M = j.value("M", cfg.M);
  cfg.rho = j.value("rho", cfg.rho);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.method = j.value("method", cfg.method);
  cfg.noise = j.value("noise", cfg.noise);
  cfg.sampler = j.value("sampler", cfg.sampler);
  cfg.target_rate = j.value("target_rate", cfg.target_rate);
  cfg.auto_floor = j.value("auto_floor", cfg.auto_floor);
  cfg.auto_cap = j.value("auto_cap", cfg.auto_cap);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.planted = j.value("planted", cfg.planted);
  if (cfg.n < 2 || cfg.r < 2 || cfg.eta <= 0 || cfg.lambda <= 0 ||
      cfg.trials < 1 || cfg.rho <= 0 || cfg.rho >= 1) {
    throw InvalidConfig("experiment config out of range");
  }
}

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision() const {
    return tp + fp == 0 ? 1.0 : static_cast<double>(tp) / (tp + fp);
  }
  double recall() const {
    return tp + fn == 0 ? 1.0 : static_cast<double>(tp) / (tp + fn);
  }
  bool exact() const { return fp == 0 && fn == 0; }
};

inline ConfusionCounts edge_confusion(
    const std::set<std::pair<int, int>>& predicted,
    const std::set<std::pair<int, int>>& truth) {
  ConfusionCounts c;
  for (const auto& e : predicted) {
    if (truth.count(e)) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  for (const auto& e : truth) {
    if (!predicted.count(e)) ++c.fn;
  }
  return c;
}

struct RecoveryMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double exact_rate = 0.0;
  int trials = 0;
  std::size_t realized_T = 0;
  std::size_t realized_M = 0;
  double theoretical_T = 0.0;  // the (impractical) theorem-rate formula
  double wall_ms = 0.0;
  qsim::QueryLedger::Counters ledger_total;
  std::vector<std::string> warnings;
};

// Sample-count formula of the classical guarantee at the chosen epsilon;
// reported next to the empirical count, never used to size runs.
inline double theoretical_sample_count(const ExperimentConfig& cfg) {
  double eps = choose_epsilon(cfg.eta, cfg.lambda, cfg.r);
  double dim_log = std::log2(std::max(
      2.0, cfg.r * std::pow(static_cast<double>(cfg.n), cfg.r) /
               (cfg.rho * eps)));
  return 4.0 * cfg.lambda * cfg.lambda * dim_log / (eps * eps);
}

namespace detail {

struct TrialOutcome {
  ConfusionCounts confusion;
  qsim::QueryLedger::Counters ledger;
};

inline MrfModel trial_model(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.planted) {
    double coeff = std::min(std::max(cfg.eta, 1.0), cfg.lambda);
    return planted_model(cfg.n, cfg.r, cfg.d, cfg.eta, cfg.lambda, coeff, seed);
  }
  return generate_model(cfg.n, cfg.r, cfg.d, cfg.eta, cfg.lambda, seed);
}

inline SampleSet trial_samples(const ExperimentConfig& cfg,
                               const MrfModel& model, std::size_t count,
                               std::uint64_t seed) {
  bool exact = cfg.sampler == "exact" ||
               (cfg.sampler == "auto" && model.n <= 16);
  if (exact) return exact_sample(model, count, seed);
  return gibbs_sample(model, count, seed);
}

inline TrialOutcome run_trial(const ExperimentConfig& cfg, std::size_t T,
                              std::size_t M, std::uint64_t trial_seed) {
  MrfModel model = trial_model(cfg, derive_seed(trial_seed, 0));
  SampleSet samples =
      trial_samples(cfg, model, T + M, derive_seed(trial_seed, 1));
  auto truth = true_edges(model.poly);

  TrialOutcome out;
  if (cfg.method == "classical" || cfg.method == "both") {
    LearnParams p{cfg.eta, cfg.lambda, cfg.r, T, M};
    GraphEstimate est = recover_graph(samples, p, 1);
    out.confusion = edge_confusion(est.edges, truth);
  }
  if (cfg.method == "qsim" || cfg.method == "both") {
    qsim::QuantumLearnParams qp;
    qp.eta = cfg.eta;
    qp.lambda = cfg.lambda;
    qp.r = cfg.r;
    qp.d = cfg.d > 0 ? cfg.d : 1;
    qp.rho = cfg.rho;
    qp.T = T;
    qp.M = M;
    qp.noise = qsim::noise_mode_from_string(cfg.noise);
    std::set<std::pair<int, int>> edges;
    std::vector<std::set<int>> per_vertex(static_cast<std::size_t>(cfg.n));
    for (int u = 1; u <= cfg.n; ++u) {
      auto res = qsim::quantum_learn_neighbors(samples, u, qp,
                                               derive_seed(trial_seed, 100 + u));
      per_vertex[u - 1] = res.neighbors.neighbors;
      out.ledger += res.ledger.total();
    }
    for (int u = 1; u <= cfg.n; ++u) {
      for (int v : per_vertex[u - 1]) {
        auto e = std::minmax(u, v);
        edges.insert({e.first, e.second});
      }
    }
    out.confusion = edge_confusion(edges, truth);
  }
  return out;
}

inline RecoveryMetrics run_at(const ExperimentConfig& cfg, std::size_t T,
                              std::size_t M, int trials) {
  RecoveryMetrics metrics;
  metrics.trials = trials;
  metrics.realized_T = T;
  metrics.realized_M = M;
  metrics.warnings = cfg.warnings();

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(trials));
  auto start = std::chrono::steady_clock::now();
  parallel_for(
      static_cast<std::size_t>(trials),
      [&](std::size_t i) {
        outcomes[i] = run_trial(cfg, T, M, derive_seed(cfg.seed, i));
      },
      cfg.threads);
  auto end = std::chrono::steady_clock::now();
  metrics.wall_ms =
      std::chrono::duration<double, std::milli>(end - start).count();

  double precision = 0.0, recall = 0.0;
  int exact = 0;
  for (const TrialOutcome& o : outcomes) {
    precision += o.confusion.precision();
    recall += o.confusion.recall();
    if (o.confusion.exact()) ++exact;
    metrics.ledger_total += o.ledger;
  }
  metrics.precision = precision / trials;
  metrics.recall = recall / trials;
  metrics.exact_rate = static_cast<double>(exact) / trials;
  metrics.theoretical_T = theoretical_sample_count(cfg);
  return metrics;
}

}  // namespace detail

// Recovery experiment: generate, sample, recover, compare, aggregate. With
// auto sizing the total sample budget doubles from auto_floor until the
// exact-recovery rate reaches the target (or the cap); the realized budget
// is reported next to the theorem formula's value.
inline RecoveryMetrics run_recovery_experiment(const ExperimentConfig& cfg) {
  if (!cfg.auto_samples()) {
    return detail::run_at(cfg, cfg.T, cfg.M, cfg.trials);
  }
  RecoveryMetrics last;
  for (std::size_t budget = cfg.auto_floor;; budget *= 2) {
    std::size_t M = std::max<std::size_t>(budget / 5, 16);
    std::size_t T = budget - M;
    last = detail::run_at(cfg, T, M, cfg.trials);
    if (last.exact_rate >= cfg.target_rate || budget * 2 > cfg.auto_cap) {
      return last;
    }
  }
}

inline double fit_loglog_slope(const std::vector<double>& xs,
                               const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw InvalidInput("need matching x/y series of length >= 2");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double lx = std::log(xs[i]);
    double ly = std::log(std::max(ys[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double k = static_cast<double>(xs.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

struct ScalingRow {
  int n = 0;
  std::size_t classical_feature_dim = 0;  // per-call K at the top level
  double classical_ops = 0.0;             // sum over levels (T+M)(2K_l+1)
  qsim::QueryLedger::Counters quantum;
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  double classical_dim_slope = 0.0;
  double grover_slope = 0.0;
  double sparsitron_units_slope = 0.0;
  int crossover_n = -1;  // first n where quantum units < classical ops

  std::string to_csv() const {
    std::ostringstream os;
    os << "n,classical_feature_dim,classical_ops,qram_queries,"
          "sample_oracle_queries,grover_iterations,sparsitron_cost_units,"
          "qram_build_units\n";
    for (const ScalingRow& row : rows) {
      os << row.n << ',' << row.classical_feature_dim << ','
         << row.classical_ops << ',' << row.quantum.qram_queries << ','
         << row.quantum.sample_oracle_queries << ','
         << row.quantum.grover_iterations << ','
         << row.quantum.sparsitron_cost_units << ','
         << row.quantum.qram_build_units << '\n';
    }
    return os.str();
  }
};

// Cost scaling versus n at fixed r, eta, lambda, rho: per-vertex counts for
// the planted-clique vertex, averaged over trials. Absolute run times are
// cost-model units; only the exponents are comparable.
inline ScalingReport scaling_report(const std::vector<int>& ns, int r,
                                    double eta, double lambda, double rho,
                                    std::size_t T, std::size_t M, int trials,
                                    std::uint64_t seed) {
  ScalingReport report;
  for (int n : ns) {
    ScalingRow row;
    row.n = n;
    for (int trial = 0; trial < trials; ++trial) {
      std::uint64_t trial_seed = derive_seed(seed, (static_cast<std::uint64_t>(n) << 16) + trial);
      MrfModel model = planted_model(n, r, r - 1, eta, lambda, eta, trial_seed);
      SampleSet samples = exact_sample(model, T + M, derive_seed(trial_seed, 1));

      LearnParams p{eta, lambda, r, T, M};
      NeighborResult classical = learn_neighbors(samples, 1, p);
      std::size_t top_dim = 0;
      double ops = 0.0;
      for (const auto& [l, dim] : classical.level_dims) {
        top_dim = std::max(top_dim, dim);
        ops += static_cast<double>(T + M) * (2.0 * dim + 1.0);
      }
      row.classical_feature_dim = std::max(row.classical_feature_dim, top_dim);
      row.classical_ops += ops;

      qsim::QuantumLearnParams qp;
      qp.eta = eta;
      qp.lambda = lambda;
      qp.r = r;
      qp.d = r - 1;
      qp.rho = rho;
      qp.T = T;
      qp.M = M;
      auto quantum = qsim::quantum_learn_neighbors(samples, 1, qp,
                                                   derive_seed(trial_seed, 2));
      row.quantum += quantum.ledger.total();
    }
    row.classical_ops /= trials;
    // counters stay raw sums; slopes are scale-free
    report.rows.push_back(row);
  }

  std::vector<double> xs, dim_ys, grover_ys, unit_ys;
  for (const ScalingRow& row : report.rows) {
    xs.push_back(row.n);
    dim_ys.push_back(static_cast<double>(row.classical_feature_dim));
    grover_ys.push_back(static_cast<double>(row.quantum.grover_iterations));
    unit_ys.push_back(row.quantum.sparsitron_cost_units);
  }
  report.classical_dim_slope = fit_loglog_slope(xs, dim_ys);
  report.grover_slope = fit_loglog_slope(xs, grover_ys);
  report.sparsitron_units_slope = fit_loglog_slope(xs, unit_ys);
  for (const ScalingRow& row : report.rows) {
    double quantum_units = row.quantum.sparsitron_cost_units +
                           static_cast<double>(row.quantum.qram_queries) +
                           static_cast<double>(row.quantum.grover_iterations);
    if (quantum_units < row.classical_ops) {
      report.crossover_n = row.n;
      break;
    }
  }
  return report;
}

}  // namespace mrfq
