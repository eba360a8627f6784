#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "mrfq/errors.hpp"
#include "mrfq/polynomial.hpp"
#include "mrfq/rng.hpp"

namespace mrfq {

struct GeneratorOptions {
  double coeff_cap = 0.0;  // 0 = derived from eta
  int max_attempts = 200;
  int clique_attempts = 60;
};

// Random identifiable model: an antichain of clique monomials of size 2..r,
// random sign, |coefficient| in [eta, cap], degrees capped at d. If the
// derivative-norm bound lambda is exceeded the polynomial is rescaled, and
// the draw is rejected whenever rescaling would push a maximal coefficient
// below eta. d = 0 yields the empty polynomial.
inline MrfModel generate_model(int n, int r, int d, double eta, double lambda,
                               std::uint64_t seed,
                               const GeneratorOptions& opts = {}) {
  if (n < 2 || r < 2 || r > n) throw InvalidConfig("need n >= 2 and 2 <= r <= n");
  if (d < 0 || d > n - 1) throw InvalidConfig("degree bound d must be in [0, n-1]");
  if (eta <= 0.0 || lambda <= 0.0) throw InvalidConfig("eta and lambda must be positive");
  if (d > 0 && eta > lambda) {
    throw InvalidConfig("infeasible: a single eta-sized clique already violates lambda");
  }
  double cap = opts.coeff_cap > 0.0 ? opts.coeff_cap : std::max(2.0 * eta, eta + 0.1);

  Rng rng(seed);
  std::uniform_real_distribution<double> mag(eta, cap);
  std::uniform_int_distribution<int> vert(1, n);

  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    MultilinearPolynomial poly(n, r);
    if (d == 0) return MrfModel(n, r, std::move(poly), eta, lambda);

    std::vector<int> degree(static_cast<std::size_t>(n) + 1, 0);
    std::set<Monomial> chosen;
    int target_cliques = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                 std::max(1, n / 2)));

    for (int tries = 0;
         tries < opts.clique_attempts &&
         static_cast<int>(chosen.size()) < target_cliques;
         ++tries) {
      int size = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(r - 1));
      std::set<int> verts;
      while (static_cast<int>(verts.size()) < size) verts.insert(vert(rng));
      Monomial candidate(std::vector<int>(verts.begin(), verts.end()));

      // Keep the support an antichain so every stored monomial is maximal.
      bool comparable = false;
      for (const Monomial& other : chosen) {
        if (candidate.subset_of(other) || other.subset_of(candidate)) {
          comparable = true;
          break;
        }
      }
      if (comparable) continue;

      // Respect the degree bound: adding a clique of size s raises the
      // degree of each member by at most s-1.
      bool fits = true;
      for (int v : candidate.indices()) {
        int added = 0;
        for (int w : candidate.indices()) {
          if (w != v && degree[v] >= 0) {
            bool already = false;
            for (const Monomial& other : chosen) {
              if (other.contains(v) && other.contains(w)) {
                already = true;
                break;
              }
            }
            if (!already) ++added;
          }
        }
        if (degree[v] + added > d) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;

      for (int v : candidate.indices()) {
        for (int w : candidate.indices()) {
          if (w == v) continue;
          bool already = false;
          for (const Monomial& other : chosen) {
            if (other.contains(v) && other.contains(w)) {
              already = true;
              break;
            }
          }
          if (!already) ++degree[v];
        }
      }
      chosen.insert(candidate);
      double c = mag(rng) * ((rng() & 1) ? 1.0 : -1.0);
      poly.set_coefficient(candidate, c);
    }
    if (chosen.empty()) continue;

    double norm = max_derivative_norm(poly);
    if (norm > lambda) {
      double scale = lambda / norm;
      bool still_identifiable = true;
      for (const auto& [mono, c] : poly.terms()) {
        if (std::abs(c) * scale < eta) {
          still_identifiable = false;
          break;
        }
      }
      if (!still_identifiable) continue;
      poly = poly.scaled(scale);
    }
    MrfModel model(n, r, std::move(poly), eta, lambda);
    if (check_identifiable(model).ok()) return model;
  }
  throw InvalidConfig("could not generate an identifiable model; eta too large for lambda?");
}

// Fixed planted structures for the recovery experiments: one clique of size
// r at low vertex ids plus disjoint pairwise edges, all coefficients at the
// same magnitude.
inline MrfModel planted_model(int n, int r, int d, double eta, double lambda,
                              double coeff, std::uint64_t seed) {
  if (coeff < eta) throw InvalidConfig("planted coefficient below eta");
  Rng rng(seed);
  MultilinearPolynomial poly(n, r);
  std::vector<int> clique;
  for (int v = 1; v <= r; ++v) clique.push_back(v);
  poly.set_coefficient(Monomial(clique), (rng() & 1) ? coeff : -coeff);
  for (int v = r + 1; v + 1 <= n && v + 1 <= r + 2 * std::max(0, d - 1);
       v += 2) {
    poly.set_coefficient(Monomial{v, v + 1}, (rng() & 1) ? coeff : -coeff);
  }
  double norm = max_derivative_norm(poly);
  if (norm > lambda) {
    throw InvalidConfig("planted structure violates lambda");
  }
  return MrfModel(n, r, std::move(poly), eta, lambda);
}

// Edge set induced by the non-constant monomials: each monomial is a clique.
inline std::set<std::pair<int, int>> true_edges(const MultilinearPolynomial& p) {
  std::set<std::pair<int, int>> edges;
  for (const auto& [mono, c] : p.terms()) {
    const auto& idx = mono.indices();
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        edges.insert({idx[a], idx[b]});
      }
    }
  }
  return edges;
}

}  // namespace mrfq
