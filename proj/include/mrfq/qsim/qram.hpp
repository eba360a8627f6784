#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "mrfq/errors.hpp"
#include "mrfq/qsim/ledger.hpp"

namespace mrfq::qsim {

inline int ceil_log2(std::uint64_t x) {
  int bits = 0;
  std::uint64_t v = 1;
  while (v < x) {
    v <<= 1;
    ++bits;
  }
  return bits;
}

// Sorted, zero-padded array behind the quantum membership circuit. Stored
// keys are 1-based values in [N]; 0 is the padding sentinel, so 0 is not a
// valid key. Capacity is the padded power of two 2^m with m address bits
// (at least one, so a singleton still stores {value, 0}).
class SortedQram {
 public:
  SortedQram(std::vector<std::uint64_t> values, std::uint64_t key_space,
             QueryLedger* ledger = nullptr,
             const std::string& phase = "qram_build")
      : key_space_(key_space) {
    if (values.empty()) throw InvalidInput("cannot build a QRAM for the empty set");
    std::sort(values.begin(), values.end());
    if (values.front() < 1) throw InvalidInput("stored keys are 1-based");
    if (values.back() > key_space_) throw InvalidInput("stored key exceeds key space");
    if (std::adjacent_find(values.begin(), values.end()) != values.end()) {
      throw InvalidInput("stored keys must be distinct");
    }
    stored_ = values.size();
    address_bits_ = std::max(1, ceil_log2(stored_));
    entries_ = std::move(values);
    entries_.resize(std::size_t{1} << address_bits_, 0);
    key_bits_ = std::max(1, ceil_log2(key_space_ + 1));
    if (ledger) {
      ledger->add_qram_build_units(
          phase, static_cast<double>(stored_) * key_bits_);
    }
  }

  std::size_t stored_count() const { return stored_; }
  std::size_t capacity() const { return entries_.size(); }
  int address_bits() const { return address_bits_; }
  int key_bits() const { return key_bits_; }
  std::uint64_t key_space() const { return key_space_; }
  const std::vector<std::uint64_t>& entries() const { return entries_; }

  // k-th stored value, 0-based address; padding positions read as 0.
  std::uint64_t query(std::size_t k) const { return entries_[k]; }

  // One QRAM query costs log N + log^2 mu elementary units.
  double query_cost_units() const {
    return key_bits_ + static_cast<double>(address_bits_) * address_bits_;
  }

 private:
  std::uint64_t key_space_ = 0;
  std::size_t stored_ = 0;
  int address_bits_ = 0;
  int key_bits_ = 0;
  std::vector<std::uint64_t> entries_;
};

// Classical basis values of the registers the membership circuit acts on:
// the input key j, the m-qubit address A, the value register B, the
// comparator qubit C and the result qubit.
struct SimRegister {
  std::uint64_t j = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  int c = 0;
  int result = 0;
};

// Comparator of the binary-search walk. Stored 0 marks trailing padding and
// compares as larger than every key, so the walk turns left off the padded
// tail and stays inside the sorted prefix.
inline bool compare_go_right(std::uint64_t j, std::uint64_t stored) {
  return stored != 0 && j > stored;
}

namespace detail {

inline void membership_query(const SortedQram& qram, SimRegister& reg,
                             std::uint64_t& queries) {
  reg.b ^= qram.query(reg.a);
  ++queries;
}

}  // namespace detail

// Reversible set-membership walk on one basis state: m comparator rounds
// that swap the comparison bit into the address register, a final lookup
// with an equality test into the result qubit, then full uncomputation.
// Returns the membership bit; every ancilla must end where it started or a
// SimError is thrown. Exactly 4m+2 QRAM queries are issued.
//
// `address_trace`, when given, records the address register after each
// forward round (the walk the worked examples print).
inline int set_membership(const SortedQram& qram, std::uint64_t j,
                          QueryLedger* ledger = nullptr,
                          const std::string& phase = "set_membership",
                          std::vector<std::uint64_t>* address_trace = nullptr,
                          int initial_result_bit = 0) {
  if (j < 1 || j > qram.key_space()) {
    throw InvalidInput("membership keys are 1-based values in [N]");
  }
  const int m = qram.address_bits();
  const std::uint64_t all_ones = (std::uint64_t{1} << m) - 1;
  std::uint64_t queries = 0;

  SimRegister reg;
  reg.j = j;
  reg.a = all_ones;  // prepared from |0...0> by X gates
  reg.result = initial_result_bit;

  // Forward comparator rounds.
  for (int t = 1; t <= m; ++t) {
    const int pos = m - t;  // t-th qubit of A, most significant first
    reg.a ^= std::uint64_t{1} << pos;
    detail::membership_query(qram, reg, queries);
    if (compare_go_right(reg.j, reg.b)) reg.c ^= 1;
    detail::membership_query(qram, reg, queries);
    const int abit = static_cast<int>((reg.a >> pos) & 1);
    reg.a = (reg.a & ~(std::uint64_t{1} << pos)) |
            (static_cast<std::uint64_t>(reg.c) << pos);
    reg.c = abit;
    if (address_trace) address_trace->push_back(reg.a);
  }

  // Final lookup and equality test.
  detail::membership_query(qram, reg, queries);
  if (reg.j == reg.b) reg.result ^= 1;
  detail::membership_query(qram, reg, queries);

  // Uncompute the comparator rounds.
  for (int t = m; t >= 1; --t) {
    const int pos = m - t;
    const int abit = static_cast<int>((reg.a >> pos) & 1);
    reg.a = (reg.a & ~(std::uint64_t{1} << pos)) |
            (static_cast<std::uint64_t>(reg.c) << pos);
    reg.c = abit;
    detail::membership_query(qram, reg, queries);
    if (compare_go_right(reg.j, reg.b)) reg.c ^= 1;
    detail::membership_query(qram, reg, queries);
    reg.a ^= std::uint64_t{1} << pos;
  }

  if (reg.a != all_ones || reg.b != 0 || reg.c != 0) {
    throw SimError("membership circuit did not restore its ancilla registers");
  }
  if (queries != 4 * static_cast<std::uint64_t>(m) + 2) {
    throw SimError("membership circuit issued an unexpected query count");
  }
  if (ledger) ledger->add_qram_queries(phase, queries);
  return reg.result;
}

struct SuperpositionReport {
  bool bijective = false;
  bool involution = false;
  bool ancillas_restored = false;
  bool weights_permuted = false;
  std::size_t basis_states = 0;
  bool ok() const {
    return bijective && involution && ancillas_restored && weights_permuted;
  }
};

// Linearity check of the membership primitive: running the circuit on every
// basis state (j, result-bit) must give a permutation whose square is the
// identity, with the supplied amplitude weights merely carried along.
inline SuperpositionReport set_membership_superposition_check(
    const SortedQram& qram, std::span<const double> weights) {
  const std::uint64_t N = qram.key_space();
  if (weights.size() != N) {
    throw InvalidInput("need one amplitude weight per key in [N]");
  }
  SuperpositionReport report;
  report.basis_states = 2 * N;
  report.ancillas_restored = true;

  std::vector<std::size_t> image(2 * N);
  std::vector<double> out_weights(2 * N, 0.0);
  for (std::uint64_t j = 1; j <= N; ++j) {
    for (int bit = 0; bit <= 1; ++bit) {
      int out_bit;
      try {
        out_bit = set_membership(qram, j, nullptr, "", nullptr, bit);
      } catch (const SimError&) {
        report.ancillas_restored = false;
        return report;
      }
      std::size_t in_index = 2 * (j - 1) + static_cast<std::size_t>(bit);
      std::size_t out_index = 2 * (j - 1) + static_cast<std::size_t>(out_bit);
      image[in_index] = out_index;
      out_weights[out_index] += weights[j - 1];
    }
  }

  std::vector<bool> hit(2 * N, false);
  report.bijective = true;
  for (std::size_t idx : image) {
    if (hit[idx]) {
      report.bijective = false;
      break;
    }
    hit[idx] = true;
  }

  report.involution = true;
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (image[image[i]] != i) {
      report.involution = false;
      break;
    }
  }

  // The result bit is XORed, so amplitudes move between the two result
  // branches of each j but their per-j mass is conserved.
  report.weights_permuted = true;
  for (std::uint64_t j = 1; j <= N; ++j) {
    double mass_in = 2.0 * weights[j - 1];
    double mass_out = out_weights[2 * (j - 1)] + out_weights[2 * (j - 1) + 1];
    if (mass_in != mass_out) {
      report.weights_permuted = false;
      break;
    }
  }
  return report;
}

}  // namespace mrfq::qsim
