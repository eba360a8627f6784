#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "mrfq/errors.hpp"

namespace mrfq {

// Index set of a multilinear monomial Z_I. Indices are 1-based vertex ids
// stored strictly increasing; the empty set is the constant monomial.
//
// Ordering is lexicographic on the index vector, which coincides with the
// order of the zero-padded fixed-length strings used by the string-set
// machinery, so iterating a std::map<Monomial, double> visits terms in
// canonical-string order.
class Monomial {
 public:
  Monomial() = default;

  explicit Monomial(std::vector<int> indices) : idx_(std::move(indices)) {
    if (!std::is_sorted(idx_.begin(), idx_.end()) ||
        std::adjacent_find(idx_.begin(), idx_.end()) != idx_.end()) {
      throw InvalidInput("monomial indices must be strictly increasing");
    }
    if (!idx_.empty() && idx_.front() < 1) {
      throw InvalidInput("monomial indices are 1-based");
    }
  }

  Monomial(std::initializer_list<int> indices)
      : Monomial(std::vector<int>(indices)) {}

  // Builds from arbitrary (unsorted, possibly repeated) indices.
  static Monomial from_multiset(std::span<const int> indices) {
    std::vector<int> v(indices.begin(), indices.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return Monomial(std::move(v));
  }

  const std::vector<int>& indices() const { return idx_; }
  std::size_t size() const { return idx_.size(); }
  bool empty() const { return idx_.empty(); }
  int max_index() const { return idx_.empty() ? 0 : idx_.back(); }

  bool contains(int u) const {
    return std::binary_search(idx_.begin(), idx_.end(), u);
  }

  bool subset_of(const Monomial& other) const {
    return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(),
                         idx_.end());
  }

  bool strict_subset_of(const Monomial& other) const {
    return size() < other.size() && subset_of(other);
  }

  // I ∪ {u}; u must not already be present.
  Monomial with(int u) const {
    std::vector<int> v = idx_;
    v.insert(std::upper_bound(v.begin(), v.end(), u), u);
    return Monomial(std::move(v));
  }

  // I \ {u}; no-op if u is absent.
  Monomial without(int u) const {
    std::vector<int> v;
    v.reserve(idx_.size());
    for (int i : idx_) {
      if (i != u) v.push_back(i);
    }
    Monomial m;
    m.idx_ = std::move(v);
    return m;
  }

  // Bit i-1 set for index i. Valid for max index <= 64.
  std::uint64_t bitmask() const {
    std::uint64_t m = 0;
    for (int i : idx_) m |= std::uint64_t{1} << (i - 1);
    return m;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t k = 0; k < idx_.size(); ++k) {
      if (k) os << ',';
      os << idx_[k];
    }
    os << '}';
    return os.str();
  }

  auto operator<=>(const Monomial&) const = default;

 private:
  std::vector<int> idx_;
};

}  // namespace mrfq
