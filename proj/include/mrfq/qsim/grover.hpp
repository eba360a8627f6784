#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mrfq/errors.hpp"
#include "mrfq/qsim/ledger.hpp"
#include "mrfq/rng.hpp"

namespace mrfq::qsim {

// Extra per-oracle-application charges: one application of a composite
// indicator touches the QRAM membership circuit and the sample oracles of
// the coefficient preparation, so searches account for those too.
struct OracleCost {
  std::uint64_t qram_queries = 0;
  std::uint64_t sample_queries = 0;
};

// Exact amplitude evolution of Grover iterations. The state stays in the
// two-dimensional span of the uniform solution / non-solution vectors, so
// two real amplitudes describe it completely.
inline double grover_success_probability(std::uint64_t k, std::uint64_t N,
                                         std::uint64_t iterations) {
  if (N == 0 || k > N) throw InvalidInput("need 0 <= k <= N, N > 0");
  if (k == 0) return 0.0;
  double a_sol = 1.0 / std::sqrt(static_cast<double>(N));
  double a_non = a_sol;
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(N);
  for (std::uint64_t t = 0; t < iterations; ++t) {
    a_sol = -a_sol;
    double mean = (kd * a_sol + (nd - kd) * a_non) / nd;
    a_sol = 2.0 * mean - a_sol;
    a_non = 2.0 * mean - a_non;
  }
  double p = kd * a_sol * a_sol;
  return std::min(1.0, std::max(0.0, p));
}

// One measurement after a fixed number of iterations.
inline bool grover_fixed_trial(std::uint64_t k, std::uint64_t N,
                               std::uint64_t iterations, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return unif(rng) < grover_success_probability(k, N, iterations);
}

struct GroverResult {
  std::optional<std::uint64_t> index;
  std::uint64_t oracle_applications = 0;
};

namespace detail {

inline std::vector<std::uint64_t> scan_solutions(
    std::uint64_t domain, const std::function<bool(std::uint64_t)>& indicator) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 0; x < domain; ++x) {
    if (indicator(x)) out.push_back(x);
  }
  return out;
}

inline void charge_oracle(QueryLedger* ledger, const std::string& phase,
                          const OracleCost& cost, std::uint64_t applications) {
  if (!ledger) return;
  ledger->add_grover_iterations(phase, applications);
  if (cost.qram_queries) {
    ledger->add_qram_queries(phase, cost.qram_queries * applications);
  }
  if (cost.sample_queries) {
    ledger->add_sample_queries(phase, cost.sample_queries * applications);
  }
}

}  // namespace detail

// Search with unknown solution count: the growing-cutoff schedule, run in
// chunks whose budget is twice the expected cost so each chunk succeeds with
// probability at least 1/2, repeated ceil(log2(1/rho)) times. Measurement is
// simulated from the exact amplitude recursion; a draw that comes back as a
// solution yields a uniformly random solution index. k_hint, when positive,
// only sizes the budget.
inline GroverResult grover_search(std::uint64_t domain,
                                  const std::function<bool(std::uint64_t)>& indicator,
                                  std::uint64_t k_hint, double rho, Rng& rng,
                                  QueryLedger* ledger = nullptr,
                                  const std::string& phase = "search",
                                  const OracleCost& cost = {}) {
  if (domain == 0) throw InvalidInput("empty search domain");
  if (rho <= 0.0 || rho >= 1.0) throw InvalidInput("rho must be in (0,1)");

  const std::vector<std::uint64_t> solutions =
      detail::scan_solutions(domain, indicator);
  const std::uint64_t k = solutions.size();
  const double sqrt_domain = std::sqrt(static_cast<double>(domain));

  GroverResult result;
  const std::uint64_t chunks =
      static_cast<std::uint64_t>(std::ceil(std::log2(1.0 / rho))) + 1;
  const double expected =
      4.5 * std::sqrt(static_cast<double>(domain) /
                      static_cast<double>(std::max<std::uint64_t>(
                          k_hint > 0 ? k_hint : 1, 1)));
  const std::uint64_t chunk_budget =
      static_cast<std::uint64_t>(std::ceil(2.0 * expected)) + 1;

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
    double m = 1.0;
    std::uint64_t spent = 0;
    while (spent < chunk_budget) {
      std::uint64_t limit = static_cast<std::uint64_t>(std::ceil(m));
      std::uniform_int_distribution<std::uint64_t> pick(0, limit - 1);
      std::uint64_t iters = pick(rng);
      std::uint64_t used = iters + 1;  // iterations plus the verification draw
      spent += used;
      result.oracle_applications += used;
      detail::charge_oracle(ledger, phase, cost, used);
      if (k > 0 && unif(rng) < grover_success_probability(k, domain, iters)) {
        std::uniform_int_distribution<std::size_t> which(0, solutions.size() - 1);
        result.index = solutions[which(rng)];
        return result;
      }
      m = std::min(m * 1.2, sqrt_domain);
    }
  }
  return result;
}

enum class CountNoise { exact, flip_within_budget };

struct CountResult {
  std::uint64_t k = 0;
  std::uint64_t true_k = 0;
  std::uint64_t oracle_applications = 0;
};

// Counting with the claimed cost profile: exact value with probability at
// least 1-rho. The failure channel is simulated by flipping to a
// neighboring wrong count with probability rho/2 (strictly inside budget);
// a zero count is always reported exactly.
inline CountResult quantum_count(std::uint64_t domain,
                                 const std::function<bool(std::uint64_t)>& indicator,
                                 double rho, Rng& rng,
                                 CountNoise noise = CountNoise::exact,
                                 QueryLedger* ledger = nullptr,
                                 const std::string& phase = "count",
                                 const OracleCost& cost = {}) {
  if (domain == 0) throw InvalidInput("empty count domain");
  if (rho <= 0.0 || rho >= 1.0) throw InvalidInput("rho must be in (0,1)");
  CountResult result;
  result.true_k = detail::scan_solutions(domain, indicator).size();
  result.k = result.true_k;

  if (result.true_k == 0) {
    result.oracle_applications = static_cast<std::uint64_t>(
        std::ceil(std::sqrt(static_cast<double>(domain))));
  } else {
    double base = std::sqrt(static_cast<double>(result.true_k) *
                            static_cast<double>(domain));
    double reps = std::max(1.0, std::ceil(std::log2(1.0 / rho)));
    result.oracle_applications =
        static_cast<std::uint64_t>(std::ceil(base * reps));
    if (noise == CountNoise::flip_within_budget) {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      if (unif(rng) < rho / 2.0) {
        result.k = (result.true_k > 1 && (rng() & 1)) ? result.true_k - 1
                                                      : result.true_k + 1;
      }
    }
  }
  detail::charge_oracle(ledger, phase, cost, result.oracle_applications);
  return result;
}

}  // namespace mrfq::qsim
