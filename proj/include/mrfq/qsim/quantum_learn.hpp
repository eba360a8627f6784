#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "mrfq/errors.hpp"
#include "mrfq/qsim/grover.hpp"
#include "mrfq/qsim/ledger.hpp"
#include "mrfq/qsim/qram.hpp"
#include "mrfq/qsim/quantum_sparsitron.hpp"
#include "mrfq/string_sets.hpp"
#include "mrfq/struct_learn.hpp"

namespace mrfq::qsim {

struct FindAllResult {
  std::set<Monomial> found;
  std::uint64_t reported_k = 0;
  std::uint64_t true_k = 0;
  std::uint64_t searches = 0;
  bool complete = false;
};

// Finds every level-l candidate whose learned coefficient clears eta: count
// the solutions first, then repeat the unknown-count search under the
// coupon-collector schedule until all of them are seen. rho is the global
// failure budget; the paper's split gives the counting and collection
// phases rho / (4 n (r-1)) each.
inline FindAllResult find_all_maximal(
    const SetFamily& fam, const std::function<double(std::uint64_t)>& q_access,
    double eta, double rho, Rng& rng, QueryLedger* ledger = nullptr,
    const OracleCost& oracle_cost = {},
    NoiseModel::Mode mode = NoiseModel::Mode::zero) {
  if (eta <= 0.0) throw InvalidInput("eta must be positive");
  if (rho <= 0.0 || rho >= 1.0) throw InvalidInput("rho must be in (0,1)");

  const std::uint64_t domain = string_space_size(fam.n, fam.r);

  // Evaluate the composite indicator once across the domain; the counting
  // and search subroutines then consult the cached solution set, which is
  // what their ledger cost model assumes anyway.
  std::vector<std::uint64_t> solutions;
  for (std::uint64_t key = 0; key < domain; ++key) {
    IndexString s = decode_string(key, fam.n, fam.r);
    if (member_F(s, fam) && std::abs(q_access(key)) >= eta) {
      solutions.push_back(key);
    }
  }
  auto indicator = [&solutions](std::uint64_t key) {
    return std::binary_search(solutions.begin(), solutions.end(), key);
  };

  const double rho_split =
      rho / (4.0 * static_cast<double>(fam.n) *
             static_cast<double>(std::max(1, fam.r - 1)));

  FindAllResult result;
  CountResult count = quantum_count(
      domain, indicator, rho_split, rng,
      mode == NoiseModel::Mode::zero ? CountNoise::exact
                                     : CountNoise::flip_within_budget,
      ledger, "count", oracle_cost);
  result.reported_k = count.k;
  result.true_k = count.true_k;
  if (count.k == 0) {
    result.complete = count.true_k == 0;
    return result;
  }

  const double k = static_cast<double>(count.k);
  double harmonic = 0.0;
  for (std::uint64_t i = 1; i <= count.k; ++i) harmonic += 1.0 / i;
  const double rho_qs = 0.25;  // constant per-search failure budget
  const std::uint64_t chunk_budget = static_cast<std::uint64_t>(
      std::ceil(2.0 * k * harmonic / (1.0 - rho_qs)));
  const std::uint64_t chunks = static_cast<std::uint64_t>(
      std::ceil(std::log2(1.0 / rho_split))) + 1;

  std::set<std::uint64_t> collected;
  for (std::uint64_t chunk = 0; chunk < chunks && collected.size() < count.k;
       ++chunk) {
    for (std::uint64_t attempt = 0;
         attempt < chunk_budget && collected.size() < count.k; ++attempt) {
      ++result.searches;
      GroverResult g = grover_search(domain, indicator, count.k, rho_qs, rng,
                                     ledger, "search", oracle_cost);
      if (g.index) collected.insert(*g.index);
    }
  }
  for (std::uint64_t key : collected) {
    result.found.insert(to_subset(decode_string(key, fam.n, fam.r)));
  }
  result.complete = collected.size() == count.k;
  return result;
}

struct QuantumLearnResult {
  NeighborResult neighbors;
  QueryLedger ledger;
  std::vector<std::size_t> w_sizes;     // per level, for the mu cap
  std::vector<std::size_t> fbar_sizes;  // per level, for the kappa cap
  long long mu_bound = 0;
  long long kappa_bound = 0;
  double epsilon = 0.0;
};

struct QuantumLearnParams {
  double eta = 0.0;
  double lambda = 0.0;
  int r = 0;
  int d = 0;  // degree bound; also the stopping threshold
  double rho = 0.1;
  std::size_t T = 0;
  std::size_t M = 0;
  NoiseModel::Mode noise = NoiseModel::Mode::zero;
  double epsilon_override = 0.0;  // 0 = use choose_epsilon
};

// The bounded-degree quantum learner: per level, build the QRAMs for W_l
// and Fbar_l, run the quantum Sparsitron at the level's failure split, then
// collect every size-l candidate above eta by quantum counting + search.
// Stops once |S| reaches the degree bound d (the classical loop runs to
// n-1). All quantum primitives are simulated at the oracle level against
// the same samples the classical path sees.
inline QuantumLearnResult quantum_learn_neighbors(const SampleSet& samples,
                                                  int u,
                                                  const QuantumLearnParams& p,
                                                  std::uint64_t seed) {
  const int n = samples.n();
  if (u < 1 || u > n) throw InvalidInput("vertex out of range");
  if (p.r < 2 || p.r > n) throw InvalidInput("clique bound r must be in [2, n]");
  if (p.d < 1 || p.d > n - 1) throw InvalidInput("degree bound d must be in [1, n-1]");
  if (samples.size() < p.T + p.M) {
    throw InvalidInput("not enough samples for T + M");
  }

  QuantumLearnResult out;
  out.neighbors.u = u;
  out.mu_bound = mu_cap(p.d, p.r);
  out.kappa_bound = kappa_cap(p.d, p.r);
  out.epsilon = p.epsilon_override > 0.0
                    ? p.epsilon_override
                    : choose_epsilon(p.eta, p.lambda, p.r);

  Rng rng(seed);
  const double rho_level =
      p.rho / (2.0 * static_cast<double>(n) * static_cast<double>(p.r - 1));
  const std::uint64_t n_prime = 2 * string_space_size(n, p.r);

  for (int l = p.r - 1; l >= 1; --l) {
    if (static_cast<int>(out.neighbors.neighbors.size()) >= p.d) break;

    SetFamily fam = build_JWF(out.neighbors.maximal_found, n, u, l, p.r, p.d);
    out.w_sizes.push_back(fam.W.size());
    out.fbar_sizes.push_back(fam.Fbar.size());

    if (!fam.W.empty()) {
      [[maybe_unused]] SortedQram w_qram(fam.W, string_space_size(n, p.r) - 1,
                                         &out.ledger, "qram_build");
    }

    std::vector<Monomial> w_block;
    for (std::uint64_t key : fam.W) {
      w_block.push_back(to_subset(decode_string(key, n, p.r)));
    }
    FeatureSpace fs = build_feature_space(n, u, l, w_block);
    MrfLevelData data(samples, fs);

    QuantumSparsitronResult qs = quantum_sparsitron(
        p.T, p.M, out.epsilon, rho_level, 2.0 * p.lambda, data, p.noise, rng,
        &out.ledger, n_prime);

    // Labels of the training prefix, needed by the reconstruction formula.
    std::vector<double> labels(qs.t_star);
    for (std::size_t t = 0; t < qs.t_star; ++t) labels[t] = data.label(t);

    OracleCost per_application;
    per_application.sample_queries =
        2 * static_cast<std::uint64_t>(qs.t_star) *
        static_cast<std::uint64_t>(p.r - 1);
    std::optional<SortedQram> fbar_qram;
    if (!fam.Fbar.empty()) {
      fbar_qram.emplace(fam.Fbar, string_space_size(n, p.r) - 1, &out.ledger,
                        "qram_build");
      per_application.qram_queries =
          2 * (4 * static_cast<std::uint64_t>(fbar_qram->address_bits()) + 2);
    }

    auto q_access = [&](std::uint64_t key) {
      IndexString s = decode_string(key, n, p.r);
      return reconstruct_coefficient(s, qs.h, qs.t_star, qs.gamma, labels,
                                     samples, 2.0 * p.lambda, qs.beta);
    };

    // The membership side of the search indicator runs through the
    // simulated reversible circuit when a complement set exists.
    auto member = [&](std::uint64_t key) {
      IndexString s = decode_string(key, n, p.r);
      if (!member_H_boundary(s, u, l)) return false;
      if (!fbar_qram) return true;
      return set_membership(*fbar_qram, key, nullptr) == 0;
    };
    auto q_access_masked = [&](std::uint64_t key) {
      return member(key) ? q_access(key) : 0.0;
    };

    SetFamily fam_for_search = fam;  // member_F uses the stored Fbar
    FindAllResult found =
        find_all_maximal(fam_for_search, q_access_masked, p.eta, p.rho, rng,
                         &out.ledger, per_application, p.noise);

    for (const Monomial& I : found.found) {
      out.neighbors.maximal_found.insert(I);
      out.neighbors.neighbors.insert(I.indices().begin(), I.indices().end());
      auto& q_map = out.neighbors.per_level_q[l];
      q_map[I] = q_access(encode_string(canonical_string(I, p.r), n));
    }
  }
  return out;
}

}  // namespace mrfq::qsim
