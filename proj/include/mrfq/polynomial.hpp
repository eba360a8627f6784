#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mrfq/errors.hpp"
#include "mrfq/monomial.hpp"

namespace mrfq {

// An assignment z in {-1,+1}^n, 1-based vertex i stored at z[i-1].
using Assignment = std::vector<std::int8_t>;

// Sparse multilinear polynomial over {-1,1}^n: a map from monomials to real
// coefficients. Zero coefficients are never stored, so "coefficient is zero"
// and "monomial absent" are the same structural statement.
class MultilinearPolynomial {
 public:
  MultilinearPolynomial() = default;

  explicit MultilinearPolynomial(int n, int degree_bound = -1)
      : n_(n), degree_bound_(degree_bound < 0 ? n : degree_bound) {
    if (n < 0) throw InvalidInput("vertex count must be nonnegative");
    if (degree_bound_ > n_) degree_bound_ = n_;
  }

  int n() const { return n_; }
  int degree_bound() const { return degree_bound_; }
  const std::map<Monomial, double>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  // Sets p̂(I) = c; c == 0 erases the term.
  void set_coefficient(const Monomial& mono, double c) {
    if (static_cast<int>(mono.size()) > degree_bound_) {
      throw InvalidInput("monomial exceeds the declared degree bound");
    }
    if (mono.max_index() > n_) {
      throw InvalidInput("monomial index exceeds the vertex count");
    }
    if (c == 0.0) {
      terms_.erase(mono);
    } else {
      terms_[mono] = c;
    }
  }

  void add_coefficient(const Monomial& mono, double c) {
    set_coefficient(mono, coefficient(mono) + c);
  }

  double coefficient(const Monomial& mono) const {
    auto it = terms_.find(mono);
    return it == terms_.end() ? 0.0 : it->second;
  }

  // Largest stored monomial size (0 for constant-only or empty).
  int degree() const {
    int d = 0;
    for (const auto& [mono, c] : terms_) {
      d = std::max(d, static_cast<int>(mono.size()));
    }
    return d;
  }

  MultilinearPolynomial operator-(const MultilinearPolynomial& rhs) const {
    MultilinearPolynomial out(std::max(n_, rhs.n_),
                              std::max(degree_bound_, rhs.degree_bound_));
    for (const auto& [mono, c] : terms_) out.add_coefficient(mono, c);
    for (const auto& [mono, c] : rhs.terms_) out.add_coefficient(mono, -c);
    return out;
  }

  MultilinearPolynomial scaled(double s) const {
    MultilinearPolynomial out(n_, degree_bound_);
    if (s == 0.0) return out;
    for (const auto& [mono, c] : terms_) out.set_coefficient(mono, c * s);
    return out;
  }

 private:
  int n_ = 0;
  int degree_bound_ = 0;
  std::map<Monomial, double> terms_;
};

inline void check_assignment(const MultilinearPolynomial& p,
                             std::span<const std::int8_t> z) {
  if (static_cast<int>(z.size()) != p.n()) {
    throw InvalidInput("assignment length does not match vertex count");
  }
}

// p(z) = sum_I p̂(I) prod_{k in I} z_k.
inline double evaluate(const MultilinearPolynomial& p,
                       std::span<const std::int8_t> z) {
  check_assignment(p, z);
  double total = 0.0;
  for (const auto& [mono, c] : p.terms()) {
    double prod = c;
    for (int i : mono.indices()) prod *= z[i - 1];
    total += prod;
  }
  return total;
}

// ∂_u p = sum_{J : u not in J} p̂(J ∪ {u}) Z_J. The result never mentions u.
inline MultilinearPolynomial partial_derivative(const MultilinearPolynomial& p,
                                                int u) {
  if (u < 1 || u > p.n()) throw InvalidInput("vertex out of range");
  MultilinearPolynomial out(p.n(), p.degree_bound());
  for (const auto& [mono, c] : p.terms()) {
    if (mono.contains(u)) out.set_coefficient(mono.without(u), c);
  }
  return out;
}

// p_u := -2 ∂_u p, the polynomial whose maximal monomials determine the
// neighborhood of u.
inline MultilinearPolynomial derive_pu(const MultilinearPolynomial& p, int u) {
  return partial_derivative(p, u).scaled(-2.0);
}

// ||p||_1 = sum_I |p̂(I)|.
inline double one_norm(const MultilinearPolynomial& p) {
  double total = 0.0;
  for (const auto& [mono, c] : p.terms()) total += std::abs(c);
  return total;
}

// All stored I such that no stored J strictly contains I.
inline std::set<Monomial> maximal_monomials(const MultilinearPolynomial& p) {
  std::set<Monomial> out;
  for (const auto& [mono, c] : p.terms()) {
    bool maximal = true;
    for (const auto& [other, c2] : p.terms()) {
      if (mono.strict_subset_of(other)) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.insert(mono);
  }
  return out;
}

// max_u ||∂_u p||_1; 0 for polynomials with no non-constant term.
inline double max_derivative_norm(const MultilinearPolynomial& p) {
  std::vector<double> per_vertex(static_cast<std::size_t>(p.n()) + 1, 0.0);
  for (const auto& [mono, c] : p.terms()) {
    for (int i : mono.indices()) per_vertex[i] += std::abs(c);
  }
  double best = 0.0;
  for (double v : per_vertex) best = std::max(best, v);
  return best;
}

// r-wise MRF model: factorization polynomial plus the identifiability floor
// eta and the derivative-norm bound lambda from the defining assumptions.
struct MrfModel {
  int n = 0;
  int r = 0;
  MultilinearPolynomial poly;
  double eta = 0.0;
  double lambda = 0.0;

  MrfModel() = default;

  MrfModel(int n_in, int r_in, MultilinearPolynomial poly_in, double eta_in,
           double lambda_in)
      : n(n_in), r(r_in), poly(std::move(poly_in)), eta(eta_in),
        lambda(lambda_in) {
    if (n < 1) throw InvalidInput("model needs at least one vertex");
    if (r < 1 || r > n) throw InvalidInput("clique bound r must be in [1, n]");
    if (poly.n() != n) throw InvalidInput("polynomial vertex count mismatch");
    if (poly.degree() > r) {
      throw InvalidInput("polynomial degree exceeds the clique bound r");
    }
    if (eta <= 0.0) throw InvalidInput("eta must be positive");
    if (lambda < 0.0) throw InvalidInput("lambda must be nonnegative");
  }
};

struct IdentifiabilityViolation {
  enum class Kind { eta_floor, lambda_bound };
  Kind kind;
  Monomial monomial;   // offending maximal monomial (eta violations)
  int vertex = 0;      // offending vertex (lambda violations)
  double value = 0.0;  // |coefficient| or derivative norm
  double bound = 0.0;  // eta or lambda
};

struct IdentifiabilityReport {
  std::vector<IdentifiabilityViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks the eta floor on maximal monomials (the constant monomial is
// permitted and ignored) and the per-vertex derivative-norm bound. A tiny
// relative slack absorbs rounding from generator rescaling on the lambda
// side; eta comparisons use the stored values exactly.
inline IdentifiabilityReport check_identifiable(const MrfModel& model) {
  IdentifiabilityReport report;
  for (const Monomial& mono : maximal_monomials(model.poly)) {
    if (mono.empty()) continue;
    double c = std::abs(model.poly.coefficient(mono));
    if (c < model.eta) {
      report.violations.push_back({IdentifiabilityViolation::Kind::eta_floor,
                                   mono, 0, c, model.eta});
    }
  }
  const double slack = 1.0 + 1e-12;
  for (int u = 1; u <= model.n; ++u) {
    double norm = one_norm(partial_derivative(model.poly, u));
    if (norm > model.lambda * slack) {
      report.violations.push_back({IdentifiabilityViolation::Kind::lambda_bound,
                                   Monomial{}, u, norm, model.lambda});
    }
  }
  return report;
}

}  // namespace mrfq
