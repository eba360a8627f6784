#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mrfq/errors.hpp"
#include "mrfq/qsim/ledger.hpp"
#include "mrfq/qsim/oracles.hpp"
#include "mrfq/rng.hpp"
#include "mrfq/sparsitron.hpp"
#include "mrfq/string_sets.hpp"

namespace mrfq::qsim {

// Oracle-noise model of the quantum estimates. Every injected perturbation
// honors the additive bound eps/(32 lambda^2) on the inner products and the
// matching relative bound on the norm estimate; amplitude estimation itself
// is never simulated.
struct NoiseModel {
  enum class Mode { zero, uniform, adversarial_sign };
  Mode mode = Mode::zero;
  double h_error_bound = 0.0;
  double gamma_rel_error_bound = 0.0;
  double failure_prob = 0.0;
};

inline NoiseModel::Mode noise_mode_from_string(const std::string& name) {
  if (name == "zero") return NoiseModel::Mode::zero;
  if (name == "uniform") return NoiseModel::Mode::uniform;
  if (name == "adversarial") return NoiseModel::Mode::adversarial_sign;
  throw InvalidInput("unknown noise mode: " + name);
}

// Bounds follow the estimate-error guarantees; lambda here is the MRF
// lambda, the Sparsitron runs at norm 2*lambda.
inline NoiseModel make_noise_model(NoiseModel::Mode mode, double eps,
                                   double lambda, double failure_prob = 0.0) {
  NoiseModel noise;
  noise.mode = mode;
  noise.failure_prob = failure_prob;
  if (mode != NoiseModel::Mode::zero && lambda > 0.0) {
    noise.h_error_bound = eps / (32.0 * lambda * lambda);
    noise.gamma_rel_error_bound = eps / (32.0 * lambda * lambda);
  }
  return noise;
}

struct QuantumSparsitronResult {
  std::size_t t_star = 0;
  std::vector<double> h;      // per-step estimates, noise included
  double gamma = 0.0;         // norm estimate at t_star (all-ones scale)
  std::vector<double> risks;  // noisy validation risks
  double beta = 0.0;
  NoiseModel noise;
  SparsitronRun run;          // the underlying trajectory
};

namespace detail {

inline double perturb(double value, double bound, NoiseModel::Mode mode,
                      Rng& rng) {
  switch (mode) {
    case NoiseModel::Mode::zero:
      return value;
    case NoiseModel::Mode::uniform: {
      std::uniform_real_distribution<double> unif(-bound, bound);
      return value + unif(rng);
    }
    case NoiseModel::Mode::adversarial_sign:
      return value - (value >= 0.0 ? bound : -bound);
  }
  return value;
}

}  // namespace detail

// The quantum Sparsitron at the oracle level: the exact multiplicative
// trajectory with every inner-product estimate perturbed inside its bound
// (the perturbed value feeds back into the weight update, as the loss
// unitaries would), iterate selection by noisy empirical risk, and a norm
// estimate with bounded relative error. The ledger charge follows the
// amplitude-estimation cost profile in the padded dimension n_prime.
inline QuantumSparsitronResult quantum_sparsitron(
    std::size_t T, std::size_t M, double eps, double rho, double norm_bound,
    const SparsitronData& data, NoiseModel::Mode mode, Rng& rng,
    QueryLedger* ledger = nullptr, std::uint64_t n_prime = 0,
    const std::string& phase = "sparsitron") {
  if (eps <= 0.0) throw InvalidInput("eps must be positive");
  if (rho <= 0.0 || rho >= 1.0) throw InvalidInput("rho must be in (0,1)");

  QuantumSparsitronResult out;
  out.noise = make_noise_model(mode, eps, norm_bound / 2.0, rho);

  SparsitronHooks hooks;
  if (mode != NoiseModel::Mode::zero) {
    const double bound = out.noise.h_error_bound;
    hooks.perturb_train = [&rng, bound, mode](double h, std::size_t) {
      return detail::perturb(h, bound, mode, rng);
    };
    hooks.perturb_val = [&rng, bound, mode](double z, std::size_t,
                                            std::size_t) {
      return detail::perturb(z, bound, mode, rng);
    };
  }

  out.run = run_sparsitron(T, M, norm_bound, data, {}, hooks);
  out.t_star = out.run.t_star;
  out.h = out.run.h;
  out.risks = out.run.risks;
  out.beta = out.run.beta;

  double gamma = out.run.gamma_allones;
  if (mode == NoiseModel::Mode::uniform) {
    std::uniform_real_distribution<double> unif(
        -out.noise.gamma_rel_error_bound, out.noise.gamma_rel_error_bound);
    gamma *= 1.0 + unif(rng);
  } else if (mode == NoiseModel::Mode::adversarial_sign) {
    gamma *= 1.0 + out.noise.gamma_rel_error_bound;
  }
  out.gamma = gamma;

  if (ledger && n_prime > 0) {
    const double sqrt_n = std::sqrt(static_cast<double>(n_prime));
    const double lam2 = norm_bound * norm_bound;
    const double log_h = std::max(1.0, std::log2(2.0 * T / rho));
    const double log_z =
        std::max(1.0, std::log2(2.0 * std::max<std::size_t>(M, 1) * T / rho));
    // sum over steps of the state-preparation depth t times the estimate
    // repetitions: O(lambda^2 T^2 M sqrt(N') / eps * log(1/rho)) in total
    double steps = static_cast<double>(T) * (static_cast<double>(T) + 1) / 2.0;
    double units = steps * sqrt_n *
                   (8.0 * lam2 / eps * log_h +
                    static_cast<double>(M) * 16.0 * norm_bound / eps * log_z);
    ledger->add_sparsitron_units(phase, units);
  }
  return out;
}

// Single-coefficient reconstruction from the returned estimates:
//   q_j = Lambda * (phi(X_j) - phi(-X_j)) / Gamma,
//   phi(X_j) = beta^{sum_{t<t*} (1 + (sigma(Lambda h_t) - Y_t) X_j_t) / 2},
// with X_j_t read from the monomial oracle. Cost O(t*) per coordinate; this
// is the route the quantum algorithm evaluates inside the search oracle,
// independent of the maintained weight vector.
inline double reconstruct_coefficient(const IndexString& s,
                                      std::span<const double> h,
                                      std::size_t t_star, double gamma,
                                      std::span<const double> labels,
                                      const SampleSet& samples,
                                      double norm_bound, double beta) {
  if (h.size() < t_star || labels.size() < t_star) {
    throw InvalidInput("need h and labels up to t_star");
  }
  double exp_pos = 0.0;
  double exp_neg = 0.0;
  for (std::size_t t = 0; t < t_star; ++t) {
    const double x = monomial_oracle(samples, t, s);
    const double g = sigmoid(norm_bound * h[t]) - labels[t];
    exp_pos += 0.5 * (1.0 + g * x);
    exp_neg += 0.5 * (1.0 - g * x);
  }
  return norm_bound * (std::pow(beta, exp_pos) - std::pow(beta, exp_neg)) /
         gamma;
}

}  // namespace mrfq::qsim
