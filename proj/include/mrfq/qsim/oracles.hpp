#pragma once

#include <cstdint>
#include <vector>

#include "mrfq/errors.hpp"
#include "mrfq/qsim/ledger.hpp"
#include "mrfq/sample_set.hpp"
#include "mrfq/string_sets.hpp"
#include "mrfq/struct_learn.hpp"

namespace mrfq::qsim {

// Monomial value Z^(m)_S: the product of sample m at every non-zero string
// position, one sample-oracle query per position. Zero positions contribute
// the fixed factor +1, so the all-zero string reads +1 (empty product) and a
// repeated index multiplies per-position (z^2 = +1); Z_S equals Z_{I(S)}
// only for strings without repeats.
inline int monomial_oracle(const SampleSet& samples, std::size_t m,
                           const IndexString& s,
                           QueryLedger* ledger = nullptr,
                           const std::string& phase = "sample_oracle") {
  if (m >= samples.size()) throw InvalidInput("sample index out of range");
  int prod = 1;
  for (int jk : s.entries) {
    if (jk != 0) prod *= samples.get(m, jk);
  }
  if (ledger) {
    ledger->add_sample_queries(phase,
                               static_cast<std::uint64_t>(s.length()));
  }
  return prod;
}

struct InputUnitaryReport {
  bool untouched_outside = true;   // strings outside H_l u W_l pass through
  bool branch_pair_ok = true;      // flagged strings split into (Z, -Z)
  bool assembly_ok = true;         // branches assemble to (0,0,X,-X)
  bool matches_build_features = true;
  std::size_t flagged = 0;
  std::size_t string_space = 0;
  bool ok() const {
    return untouched_outside && branch_pair_ok && assembly_ok &&
           matches_build_features;
  }
};

// Basis-state simulation of the Sparsitron input unitary at one level:
// apply the H_l u W_l flag, the controlled monomial oracle and the
// controlled sign to every string, then check that the union of branches is
// exactly the enlarged feature vector (up to the index bijection, which is
// never needed explicitly).
inline InputUnitaryReport input_unitary_check(const SetFamily& fam,
                                              const SampleSet& samples,
                                              std::size_t m) {
  InputUnitaryReport report;
  const int n = fam.n;
  const int r = fam.r;
  const std::uint64_t space = string_space_size(n, r);
  report.string_space = space;

  Assignment z = samples.row(m);

  // Per-branch simulated outputs for flagged strings, keyed by encoded
  // string: branch 0 holds Z_S, branch 1 holds -Z_S.
  std::vector<std::pair<std::uint64_t, std::pair<int, int>>> flagged_values;

  for (std::uint64_t key = 0; key < space; ++key) {
    IndexString s = decode_string(key, n, r);
    const bool flagged = member_H(s, fam.u, fam.l) || fam.in_W(key);

    // Registers (flag, sign branch, string, value); value 0 plays the role
    // of the untouched |0bar>.
    for (int branch = 0; branch <= 1; ++branch) {
      int flag = 0;
      int value = 0;
      if (flagged) {
        flag = 1;                                    // U_{H u W}
        value = monomial_oracle(samples, m, s);      // controlled U_Z
        if (branch == 1) value = -value;             // controlled sign
      }
      if (!flagged && (flag != 0 || value != 0)) {
        report.untouched_outside = false;
      }
      if (flagged && branch == 0) {
        flagged_values.push_back({key, {value, -value}});
      }
    }
    if (flagged) ++report.flagged;
  }

  // Branch contents: Z_S on the 0 branch, -Z_S on the 1 branch.
  for (const auto& [key, pair] : flagged_values) {
    IndexString s = decode_string(key, n, r);
    double expected = 1.0;
    Monomial subset = to_subset(s);
    for (int i : subset.indices()) expected *= z[i - 1];
    if (pair.first != static_cast<int>(expected) ||
        pair.second != -static_cast<int>(expected)) {
      report.branch_pair_ok = false;
    }
  }

  // Assembly: 2K coordinates total, zeros everywhere except the flagged
  // branch pairs, which carry X and -X.
  std::size_t zeros = 2 * (static_cast<std::size_t>(space) - report.flagged);
  std::size_t values = 2 * report.flagged;
  if (zeros + values != 2 * static_cast<std::size_t>(space)) {
    report.assembly_ok = false;
  }

  // Cross-module equality with the classical feature builder: the flagged
  // strings in H_l are exactly the base block and the rest the W block.
  std::vector<Monomial> w_block;
  for (std::uint64_t key : fam.W) {
    w_block.push_back(to_subset(decode_string(key, n, r)));
  }
  FeatureSpace fs = build_feature_space(n, fam.u, fam.l, w_block);
  std::vector<double> classical = build_features(z, fam.u, fam.l, w_block);
  if (fs.dim() != report.flagged) {
    report.matches_build_features = false;
  } else {
    for (std::size_t jidx = 0; jidx < fs.dim(); ++jidx) {
      std::uint64_t key =
          encode_string(canonical_string(fs.monomials[jidx], r), n);
      bool found = false;
      for (const auto& [fkey, pair] : flagged_values) {
        if (fkey == key) {
          found = true;
          if (pair.first != static_cast<int>(classical[jidx])) {
            report.matches_build_features = false;
          }
          break;
        }
      }
      if (!found) report.matches_build_features = false;
    }
  }
  return report;
}

}  // namespace mrfq::qsim
