#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include <json.hpp>

#include "mrfq/errors.hpp"
#include "mrfq/monomial.hpp"

namespace mrfq {

// Fixed-length string over {0} u [n]: the padded index representation the
// quantum membership machinery works with. Length is always r-1.
struct IndexString {
  std::vector<int> entries;

  std::size_t length() const { return entries.size(); }

  bool operator==(const IndexString&) const = default;
};

// Subset of the non-zero entries, deduplicated and sorted.
inline Monomial to_subset(const IndexString& s) {
  std::vector<int> nz;
  for (int e : s.entries) {
    if (e != 0) nz.push_back(e);
  }
  return Monomial::from_multiset(nz);
}

// Ascending indices followed by zero padding; the one string per subset that
// the ordered-string sets contain. to_subset(canonical_string(I)) == I.
inline IndexString canonical_string(const Monomial& I, int r) {
  if (static_cast<int>(I.size()) > r - 1) {
    throw InvalidInput("monomial does not fit in a length r-1 string");
  }
  IndexString s;
  s.entries = I.indices();
  s.entries.resize(static_cast<std::size_t>(r - 1), 0);
  return s;
}

// Strings encode as base-(n+1) integers, most significant entry first. This
// is the total order the sorted QRAM stores; key 0 is the all-zero string
// and is reserved as the padding sentinel.
inline std::uint64_t encode_string(const IndexString& s, int n) {
  std::uint64_t key = 0;
  for (int e : s.entries) {
    if (e < 0 || e > n) throw InvalidInput("string entry out of range");
    key = key * static_cast<std::uint64_t>(n + 1) + static_cast<std::uint64_t>(e);
  }
  return key;
}

inline IndexString decode_string(std::uint64_t key, int n, int r) {
  IndexString s;
  s.entries.assign(static_cast<std::size_t>(r - 1), 0);
  for (int pos = r - 2; pos >= 0; --pos) {
    s.entries[pos] = static_cast<int>(key % static_cast<std::uint64_t>(n + 1));
    key /= static_cast<std::uint64_t>(n + 1);
  }
  if (key != 0) throw InvalidInput("key does not fit a length r-1 string");
  return s;
}

inline std::uint64_t string_space_size(int n, int r) {
  std::uint64_t total = 1;
  for (int i = 0; i < r - 1; ++i) total *= static_cast<std::uint64_t>(n + 1);
  return total;
}

// Membership in the ordered-string set H_l: u absent, 1 <= |I(s)| <= l, and
// entries strictly ascending with trailing zeros only.
inline bool member_H(const IndexString& s, int u, int l) {
  int k = 0;
  bool in_padding = false;
  int prev = 0;
  for (int e : s.entries) {
    if (e == u) return false;
    if (e == 0) {
      in_padding = true;
      continue;
    }
    if (in_padding) return false;  // nonzero after a zero
    if (e <= prev) return false;   // not strictly ascending
    prev = e;
    ++k;
  }
  return k >= 1 && k <= l;
}

// H_l \ H_{l-1}: canonical strings with exactly l non-zero entries.
inline bool member_H_boundary(const IndexString& s, int u, int l) {
  return member_H(s, u, l) && !member_H(s, u, l - 1);
}

// The four string families at one level of the iterative learner.  F_l is
// huge (~ C(n-1, l)) and is never materialized; membership goes through the
// H_l \ H_{l-1} test plus exclusion against the stored complement Fbar_l,
// which is all the quantum algorithm ever keeps in QRAM.
struct SetFamily {
  int n = 0;
  int r = 0;
  int u = 0;
  int l = 0;
  std::vector<std::uint64_t> J;     // encoded canonical strings, sorted
  std::vector<std::uint64_t> W;     // encoded canonical strings, sorted
  std::vector<std::uint64_t> Fbar;  // encoded canonical strings, sorted
  long long mu_bound = 0;           // |W_l| cap for degree-d generators
  long long kappa_bound = 0;        // |Fbar_l| cap for degree-d generators

  bool in_J(std::uint64_t key) const {
    return std::binary_search(J.begin(), J.end(), key);
  }
  bool in_W(std::uint64_t key) const {
    return std::binary_search(W.begin(), W.end(), key);
  }
  bool in_Fbar(std::uint64_t key) const {
    return std::binary_search(Fbar.begin(), Fbar.end(), key);
  }
};

inline long long mu_cap(int d, int r) {
  double pow2 = std::pow(2.0, d) - 1.0;
  double powd = std::pow(static_cast<double>(d), r - 1);
  return static_cast<long long>(std::min(pow2, powd));
}

inline long long kappa_cap(int d, int r) {
  double pow2 = std::pow(2.0, d) / std::sqrt(static_cast<double>(d));
  double powd = std::pow(static_cast<double>(d), r - 2);
  return static_cast<long long>(std::floor(std::min(pow2, powd)));
}

namespace detail {

inline void subsets_of(const Monomial& I,
                       const std::function<void(const Monomial&)>& emit) {
  const auto& idx = I.indices();
  std::uint64_t count = std::uint64_t{1} << idx.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    std::vector<int> sub;
    for (std::size_t b = 0; b < idx.size(); ++b) {
      if ((mask >> b) & 1) sub.push_back(idx[b]);
    }
    emit(Monomial(std::move(sub)));
  }
}

}  // namespace detail

// Builds the level-l family from the maximal monomials found so far (all
// with size in (l, r-1], none containing u):
//   J_l    = their canonical strings,
//   W_l    = canonical strings of their subsets of size > l,
//   Fbar_l = canonical strings of their size-l subsets.
inline SetFamily build_JWF(const std::set<Monomial>& maximal, int n, int u,
                           int l, int r, int degree_hint = -1) {
  if (l < 1 || l > r - 1) throw InvalidInput("level must be in [1, r-1]");
  if (u < 1 || u > n) throw InvalidInput("vertex out of range");
  SetFamily fam;
  fam.n = n;
  fam.r = r;
  fam.u = u;
  fam.l = l;

  std::set<std::uint64_t> J, W, Fbar;
  std::set<int> support;
  for (const Monomial& I : maximal) {
    if (static_cast<int>(I.size()) <= l || static_cast<int>(I.size()) > r - 1) {
      throw InvalidInput("maximal monomial size must lie in (l, r-1]");
    }
    if (I.contains(u)) throw InvalidInput("maximal monomial mentions u");
    support.insert(I.indices().begin(), I.indices().end());
    J.insert(encode_string(canonical_string(I, r), n));
    detail::subsets_of(I, [&](const Monomial& sub) {
      if (static_cast<int>(sub.size()) > l) {
        W.insert(encode_string(canonical_string(sub, r), n));
      } else if (static_cast<int>(sub.size()) == l) {
        Fbar.insert(encode_string(canonical_string(sub, r), n));
      }
    });
  }
  fam.J.assign(J.begin(), J.end());
  fam.W.assign(W.begin(), W.end());
  fam.Fbar.assign(Fbar.begin(), Fbar.end());

  int d = degree_hint > 0 ? degree_hint : static_cast<int>(support.size());
  if (d > 0) {
    fam.mu_bound = mu_cap(d, r);
    fam.kappa_bound = kappa_cap(d, r);
  }
  return fam;
}

// s in F_l: in the level boundary H_l \ H_{l-1} and not a stored subset of a
// found maximal monomial.
inline bool member_F(const IndexString& s, const SetFamily& fam) {
  if (!member_H_boundary(s, fam.u, fam.l)) return false;
  return !fam.in_Fbar(encode_string(s, fam.n));
}

inline std::vector<int> decode_subset_indices(std::uint64_t key, int n, int r) {
  return to_subset(decode_string(key, n, r)).indices();
}

// Debug dump of one family as JSON arrays of index arrays.
inline nlohmann::json family_to_json(const SetFamily& fam) {
  nlohmann::json j;
  j["u"] = fam.u;
  j["l"] = fam.l;
  j["mu_bound"] = fam.mu_bound;
  j["kappa_bound"] = fam.kappa_bound;
  auto dump = [&](const std::vector<std::uint64_t>& keys) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::uint64_t k : keys) {
      arr.push_back(decode_subset_indices(k, fam.n, fam.r));
    }
    return arr;
  };
  j["J"] = dump(fam.J);
  j["W"] = dump(fam.W);
  j["Fbar"] = dump(fam.Fbar);
  return j;
}

}  // namespace mrfq
