#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "mrfq/errors.hpp"
#include "mrfq/polynomial.hpp"
#include "mrfq/rng.hpp"
#include "mrfq/sample_set.hpp"

namespace mrfq {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Pr[Z_i = -1 | Z_{-i} = z] = sigma(-2 d_i p(z)). Independent of z_i because
// the derivative polynomial never mentions i.
inline double conditional_minus_prob(const MultilinearPolynomial& p,
                                     std::span<const std::int8_t> z, int i) {
  if (i < 1 || i > p.n()) throw InvalidInput("site index out of range");
  check_assignment(p, z);
  return sigmoid(-2.0 * evaluate(partial_derivative(p, i), z));
}

// Complement conditional, computed as sigma(+2 d_i p(z)).
inline double conditional_plus_prob(const MultilinearPolynomial& p,
                                    std::span<const std::int8_t> z, int i) {
  if (i < 1 || i > p.n()) throw InvalidInput("site index out of range");
  check_assignment(p, z);
  return sigmoid(2.0 * evaluate(partial_derivative(p, i), z));
}

// State index encoding for exact enumeration: bit i-1 of s is 1 iff z_i = +1.
inline Assignment assignment_from_index(int n, std::uint64_t s) {
  Assignment z(n);
  for (int i = 0; i < n; ++i) z[i] = (s >> i) & 1 ? 1 : -1;
  return z;
}

// Full 2^n probability table of P[Z = z] with its running CDF.
struct ExactTable {
  int n = 0;
  std::vector<double> probs;  // indexed by state index
  std::vector<double> cdf;
};

inline ExactTable build_exact_table(const MultilinearPolynomial& p,
                                    int max_n = 20) {
  if (p.n() > max_n) {
    throw UnsupportedSize("exact enumeration limited to n <= " +
                          std::to_string(max_n));
  }
  ExactTable table;
  table.n = p.n();
  std::size_t states = std::size_t{1} << p.n();
  table.probs.resize(states);
  double total = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    Assignment z = assignment_from_index(p.n(), s);
    table.probs[s] = std::exp(evaluate(p, z));
    total += table.probs[s];
  }
  table.cdf.resize(states);
  double acc = 0.0;
  for (std::size_t s = 0; s < states; ++s) {
    table.probs[s] /= total;
    acc += table.probs[s];
    table.cdf[s] = acc;
  }
  table.cdf.back() = 1.0;
  return table;
}

// Exact conditional P[Z_i = -1 | Z_{-i}] from the table, by normalizing the
// two states that differ at site i. Reference oracle for the sigmoid formula.
inline double table_conditional_minus(const ExactTable& table, std::uint64_t s,
                                      int i) {
  std::uint64_t minus = s & ~(std::uint64_t{1} << (i - 1));
  std::uint64_t plus = s | (std::uint64_t{1} << (i - 1));
  double pm = table.probs[minus];
  double pp = table.probs[plus];
  return pm / (pm + pp);
}

// M i.i.d. draws via inverse-CDF over the exact table. Feasible for n <= 20.
inline SampleSet exact_sample(const MrfModel& model, std::size_t count,
                              std::uint64_t seed) {
  ExactTable table = build_exact_table(model.poly);
  SampleSet out(model.n, seed);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t m = 0; m < count; ++m) {
    double u = unif(rng);
    auto it = std::lower_bound(table.cdf.begin(), table.cdf.end(), u);
    std::uint64_t s = static_cast<std::uint64_t>(it - table.cdf.begin());
    out.append(assignment_from_index(model.n, s));
  }
  return out;
}

// Per-site derivative terms, precomputed so a Gibbs sweep does not rebuild
// polynomials: d_i p(z) = sum_k coeff_k * prod_{j in rest_k} z_j.
struct SiteDerivatives {
  struct Term {
    double coeff;
    std::vector<int> rest;
  };
  std::vector<std::vector<Term>> per_site;  // index i-1

  explicit SiteDerivatives(const MultilinearPolynomial& p)
      : per_site(static_cast<std::size_t>(p.n())) {
    for (const auto& [mono, c] : p.terms()) {
      for (int i : mono.indices()) {
        per_site[i - 1].push_back({c, mono.without(i).indices()});
      }
    }
  }

  double eval(int i, const Assignment& z) const {
    double total = 0.0;
    for (const Term& t : per_site[i - 1]) {
      double prod = t.coeff;
      for (int j : t.rest) prod *= z[j - 1];
      total += prod;
    }
    return total;
  }
};

inline void gibbs_sweep(const SiteDerivatives& deriv, Assignment& z, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int n = static_cast<int>(z.size());
  for (int i = 1; i <= n; ++i) {
    double p_minus = sigmoid(-2.0 * deriv.eval(i, z));
    z[i - 1] = unif(rng) < p_minus ? std::int8_t{-1} : std::int8_t{1};
  }
}

// Heuristic mixing defaults, validated against the exact table for every
// n <= 12 test model.
inline std::size_t default_burn_in(int n) { return 50 * static_cast<std::size_t>(n); }
inline std::size_t default_thinning(int n) { return static_cast<std::size_t>(n); }

// M approximately independent samples from a single sequential chain; one
// sweep resamples all n sites in order from the conditional formula.
inline SampleSet gibbs_sample(const MrfModel& model, std::size_t count,
                              std::size_t burn_in, std::size_t thinning,
                              std::uint64_t seed) {
  if (burn_in < 1 || thinning < 1) {
    throw InvalidInput("burn_in and thinning must be at least one sweep");
  }
  SiteDerivatives deriv(model.poly);
  SampleSet out(model.n, seed);
  Rng rng(seed);
  Assignment z(model.n);
  for (int i = 0; i < model.n; ++i) z[i] = (rng() & 1) ? 1 : -1;
  for (std::size_t s = 0; s < burn_in; ++s) gibbs_sweep(deriv, z, rng);
  for (std::size_t m = 0; m < count; ++m) {
    for (std::size_t s = 0; s < thinning; ++s) gibbs_sweep(deriv, z, rng);
    out.append(z);
  }
  return out;
}

inline SampleSet gibbs_sample(const MrfModel& model, std::size_t count,
                              std::uint64_t seed) {
  return gibbs_sample(model, count, default_burn_in(model.n),
                      default_thinning(model.n), seed);
}

// delta = e^{-2 lambda} / 2: every single-site conditional of the model
// distribution is at least delta.
inline double unbiasedness_floor(const MrfModel& model) {
  return std::exp(-2.0 * model.lambda) / 2.0;
}

struct UnbiasednessCheck {
  double delta = 0.0;
  double min_conditional = 1.0;
  bool holds = false;
};

// Exhaustive verification of the floor over every site and conditioning,
// using the exact table. Requires n small enough to enumerate.
inline UnbiasednessCheck check_unbiasedness(const MrfModel& model,
                                            int max_n = 16) {
  UnbiasednessCheck result;
  result.delta = unbiasedness_floor(model);
  ExactTable table = build_exact_table(model.poly, max_n);
  std::size_t states = std::size_t{1} << model.n;
  for (int i = 1; i <= model.n; ++i) {
    for (std::uint64_t s = 0; s < states; ++s) {
      if ((s >> (i - 1)) & 1) continue;  // each conditioning once
      double pm = table_conditional_minus(table, s, i);
      result.min_conditional = std::min(result.min_conditional, pm);
      result.min_conditional = std::min(result.min_conditional, 1.0 - pm);
    }
  }
  result.holds = result.min_conditional >= result.delta;
  return result;
}

}  // namespace mrfq
