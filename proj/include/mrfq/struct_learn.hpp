#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "mrfq/errors.hpp"
#include "mrfq/parallel.hpp"
#include "mrfq/polynomial.hpp"
#include "mrfq/sample_set.hpp"
#include "mrfq/sparsitron.hpp"
#include "mrfq/string_sets.hpp"

namespace mrfq {

// Feature coordinates of one learning level: every monomial I with
// 1 <= |I| <= l and u not in I, in canonical-string order, followed by the
// carried-over W block. Dimension is K_l = sum_k C(n-1,k) + |W_l|.
struct FeatureSpace {
  int n = 0;
  int u = 0;
  int l = 0;
  std::vector<Monomial> monomials;
  std::size_t base_count = 0;            // size of the |I| <= l block
  std::vector<std::uint64_t> masks;      // per-monomial vertex bitmask, n <= 64

  std::size_t dim() const { return monomials.size(); }
};

namespace detail {

inline void enumerate_ascending(int n, int u, int l, std::vector<int>& prefix,
                                std::vector<Monomial>& out) {
  int start = prefix.empty() ? 1 : prefix.back() + 1;
  for (int next = start; next <= n; ++next) {
    if (next == u) continue;
    prefix.push_back(next);
    out.emplace_back(prefix);
    if (static_cast<int>(prefix.size()) < l) {
      enumerate_ascending(n, u, l, prefix, out);
    }
    prefix.pop_back();
  }
}

}  // namespace detail

inline FeatureSpace build_feature_space(int n, int u, int l,
                                        const std::vector<Monomial>& w_block) {
  FeatureSpace fs;
  fs.n = n;
  fs.u = u;
  fs.l = l;
  std::vector<int> prefix;
  detail::enumerate_ascending(n, u, l, prefix, fs.monomials);
  fs.base_count = fs.monomials.size();
  for (const Monomial& I : w_block) {
    if (I.contains(u)) throw InvalidInput("W-block monomial mentions u");
    fs.monomials.push_back(I);
  }
  if (n <= 64) {
    fs.masks.reserve(fs.monomials.size());
    for (const Monomial& I : fs.monomials) fs.masks.push_back(I.bitmask());
  }
  return fs;
}

// z_I for a bit-packed row: the product of +-1 entries is +1 exactly when the
// number of -1 sites inside I is even.
inline double feature_from_word(std::uint64_t row_word, std::uint64_t mask) {
  return (std::popcount(~row_word & mask) & 1) ? -1.0 : 1.0;
}

inline void fill_features(const FeatureSpace& fs, std::uint64_t row_word,
                          std::span<double> out) {
  for (std::size_t j = 0; j < fs.masks.size(); ++j) {
    out[j] = feature_from_word(row_word, fs.masks[j]);
  }
}

// Spec-level variant on an explicit assignment.
inline std::vector<double> build_features(std::span<const std::int8_t> z,
                                          int u, int l,
                                          const std::vector<Monomial>& w_block) {
  FeatureSpace fs = build_feature_space(static_cast<int>(z.size()), u, l,
                                        w_block);
  std::vector<double> out(fs.dim());
  for (std::size_t j = 0; j < fs.dim(); ++j) {
    double prod = 1.0;
    for (int i : fs.monomials[j].indices()) prod *= z[i - 1];
    out[j] = prod;
  }
  return out;
}

// Streams enlarged rows (x, -x, 0) of one level directly from the packed
// sample words; labels are Y = (1 - Z_u) / 2.
class MrfLevelData final : public SparsitronData {
 public:
  MrfLevelData(const SampleSet& samples, const FeatureSpace& fs)
      : samples_(samples), fs_(fs) {
    if (samples.n() > 64) throw UnsupportedSize("packed features need n <= 64");
  }

  std::size_t dimension() const override { return 2 * fs_.dim() + 1; }
  std::size_t count() const override { return samples_.size(); }

  void load(std::size_t i, std::span<double> out) const override {
    const std::size_t K = fs_.dim();
    fill_features(fs_, samples_.row_word(i), out.subspan(0, K));
    for (std::size_t j = 0; j < K; ++j) out[K + j] = -out[j];
    out[2 * K] = 0.0;
  }

  double label(std::size_t i) const override {
    return samples_.get(i, fs_.u) == 1 ? 0.0 : 1.0;
  }

 private:
  const SampleSet& samples_;
  const FeatureSpace& fs_;
};

struct NeighborResult {
  int u = 0;
  std::set<int> neighbors;
  std::set<Monomial> maximal_found;
  std::map<int, std::map<Monomial, double>> per_level_q;  // diagnostics
  std::map<int, std::size_t> level_dims;                  // K_l per level
};

struct LearnParams {
  double eta = 0.0;
  double lambda = 0.0;
  int r = 0;
  std::size_t T = 0;
  std::size_t M = 0;
};

namespace detail {

inline bool contained_in_any(const Monomial& I, const std::set<Monomial>& J) {
  for (const Monomial& A : J) {
    if (I.subset_of(A)) return true;
  }
  return false;
}

inline std::vector<Monomial> w_block_from_J(const std::set<Monomial>& J, int n,
                                            int u, int l, int r) {
  if (J.empty()) return {};
  SetFamily fam = build_JWF(J, n, u, l, r);
  std::vector<Monomial> out;
  out.reserve(fam.W.size());
  for (std::uint64_t key : fam.W) {
    out.push_back(to_subset(decode_string(key, n, r)));
  }
  return out;
}

}  // namespace detail

// One vertex of the iterative structure learner: walk the level l from r-1
// down to 1, learn q_l with the Sparsitron at norm 2*lambda on the enlarged
// level features, and keep every size-l candidate whose learned coefficient
// clears eta. Early exit once u cannot have more neighbors.
inline NeighborResult learn_neighbors(const SampleSet& samples, int u,
                                      const LearnParams& p) {
  const int n = samples.n();
  if (u < 1 || u > n) throw InvalidInput("vertex out of range");
  if (p.r < 2 || p.r > n) throw InvalidInput("clique bound r must be in [2, n]");
  if (p.eta <= 0.0 || p.lambda <= 0.0) {
    throw InvalidInput("eta and lambda must be positive");
  }
  if (samples.size() < p.T + p.M) {
    throw InvalidInput("not enough samples for T + M");
  }

  NeighborResult result;
  result.u = u;

  for (int l = p.r - 1; l >= 1; --l) {
    if (static_cast<int>(result.neighbors.size()) >= n - 1) break;

    std::vector<Monomial> w_block =
        detail::w_block_from_J(result.maximal_found, n, u, l, p.r);
    FeatureSpace fs = build_feature_space(n, u, l, w_block);
    result.level_dims[l] = fs.dim();
    MrfLevelData data(samples, fs);
    SparsitronRun run = run_sparsitron(p.T, p.M, 2.0 * p.lambda, data);
    std::vector<double> q = fold(run.v);

    auto& q_map = result.per_level_q[l];
    for (std::size_t j = 0; j < fs.dim(); ++j) {
      if (q[j] != 0.0) q_map[fs.monomials[j]] = q[j];
    }

    for (std::size_t j = 0; j < fs.base_count; ++j) {
      const Monomial& I = fs.monomials[j];
      if (static_cast<int>(I.size()) != l) continue;
      if (detail::contained_in_any(I, result.maximal_found)) continue;
      if (std::abs(q[j]) > p.eta) {
        result.maximal_found.insert(I);
        result.neighbors.insert(I.indices().begin(), I.indices().end());
      }
    }
  }
  return result;
}

// epsilon threshold that makes the learned coefficients trustworthy at the
// eta/2 margin: c * e^{-6 - 4 lambda - 2 lambda (r-1)} * eta^2 / 2^{r+1}.
inline double choose_epsilon(double eta, double lambda, int r, double c = 0.5) {
  if (eta <= 0.0 || lambda < 0.0 || r < 1 || c <= 0.0 || c > 1.0) {
    throw InvalidInput("choose_epsilon arguments out of range");
  }
  return c * std::exp(-6.0 - 4.0 * lambda - 2.0 * lambda * (r - 1)) * eta *
         eta / std::pow(2.0, r + 1);
}

struct GraphEstimate {
  int n = 0;
  std::set<std::pair<int, int>> edges;            // u < v
  std::vector<std::pair<int, int>> asymmetry;     // one-sided detections
  std::vector<NeighborResult> per_vertex;         // indexed u-1
};

// Whole-graph recovery: one neighborhood run per vertex, edge kept when
// either endpoint reports the other. One-sided detections are surfaced, not
// silently resolved.
inline GraphEstimate recover_graph(const SampleSet& samples,
                                   const LearnParams& p, unsigned threads = 1) {
  GraphEstimate est;
  est.n = samples.n();
  est.per_vertex.resize(static_cast<std::size_t>(est.n));
  parallel_for(
      static_cast<std::size_t>(est.n),
      [&](std::size_t i) {
        est.per_vertex[i] = learn_neighbors(samples, static_cast<int>(i) + 1, p);
      },
      threads);
  for (int u = 1; u <= est.n; ++u) {
    for (int v : est.per_vertex[u - 1].neighbors) {
      bool reciprocal = est.per_vertex[v - 1].neighbors.count(u) > 0;
      auto edge = std::minmax(u, v);
      est.edges.insert({edge.first, edge.second});
      if (!reciprocal && u < v) est.asymmetry.push_back({u, v});
    }
  }
  // Pairs detected only from the higher endpoint still count as asymmetric.
  for (int u = 1; u <= est.n; ++u) {
    for (int v : est.per_vertex[u - 1].neighbors) {
      if (u > v && est.per_vertex[v - 1].neighbors.count(u) == 0) {
        est.asymmetry.push_back({v, u});
      }
    }
  }
  return est;
}

}  // namespace mrfq
