#include <catch2/catch_amalgamated.hpp>

#include "mrfq/harness/generate.hpp"
#include "mrfq/qsim/oracles.hpp"
#include "mrfq/sampler.hpp"

using namespace mrfq;
using namespace mrfq::qsim;

namespace {

SampleSet fixed_samples() {
  // two handcrafted rows over n = 4
  SampleSet s(4, 0);
  s.append(Assignment{1, -1, 1, -1});
  s.append(Assignment{-1, -1, 1, 1});
  return s;
}

}  // namespace

TEST_CASE("monomial oracle basics") {
  SampleSet s = fixed_samples();

  CHECK(monomial_oracle(s, 0, IndexString{{0, 0}}) == 1);  // empty product
  CHECK(monomial_oracle(s, 0, IndexString{{2, 0}}) == -1);
  CHECK(monomial_oracle(s, 0, IndexString{{2, 4}}) == 1);  // (-1)(-1)
  // repeated index multiplies per position: z3 * z3 = +1
  CHECK(monomial_oracle(s, 0, IndexString{{3, 3}}) == 1);
  CHECK(monomial_oracle(s, 1, IndexString{{1, 3}}) == -1);

  QueryLedger ledger;
  monomial_oracle(s, 0, IndexString{{2, 4}}, &ledger);
  CHECK(ledger.total().sample_oracle_queries == 2);  // r-1 per call

  CHECK_THROWS_AS(monomial_oracle(s, 5, IndexString{{1, 0}}), InvalidInput);
}

TEST_CASE("monomial oracle equals the subset product on canonical strings") {
  Rng rng(22);
  MrfModel model = generate_model(6, 3, 3, 0.4, 1.5, 99);
  SampleSet s = exact_sample(model, 40, 7);
  for (std::size_t m = 0; m < s.size(); ++m) {
    Assignment z = s.row(m);
    for (std::uint64_t key = 0; key < string_space_size(6, 3); ++key) {
      IndexString str = decode_string(key, 6, 3);
      int got = monomial_oracle(s, m, str);
      // per-position product
      int expect = 1;
      for (int jk : str.entries) {
        if (jk != 0) expect *= z[jk - 1];
      }
      CHECK(got == expect);
    }
  }
}

TEST_CASE("input unitary check on a planted family") {
  MultilinearPolynomial pu(4, 2);
  pu.set_coefficient(Monomial{3}, 1.0);
  pu.set_coefficient(Monomial{4}, 1.5);
  pu.set_coefficient(Monomial{2, 3}, 2.0);
  std::set<Monomial> maximal_above;
  for (const Monomial& I : maximal_monomials(pu)) {
    if (I.size() > 1) maximal_above.insert(I);
  }
  SetFamily fam = build_JWF(maximal_above, 4, 1, 1, 3);

  MultilinearPolynomial p(4, 3);
  p.set_coefficient(Monomial{1, 2, 3}, 0.6);
  MrfModel model(4, 3, p, 0.4, 1.0);
  SampleSet s = exact_sample(model, 10, 3);

  for (std::size_t m = 0; m < 5; ++m) {
    InputUnitaryReport report = input_unitary_check(fam, s, m);
    CHECK(report.ok());
    // |H_1| = 3 ({2},{3},{4}) plus W = {(2,3)}
    CHECK(report.flagged == 4);
    CHECK(report.string_space == 25);
  }
}

TEST_CASE("input unitary check across random levels") {
  Rng rng(5150);
  for (int trial = 0; trial < 10; ++trial) {
    MrfModel model = generate_model(5, 3, 3, 0.4, 1.5, derive_seed(1000, trial));
    SampleSet s = exact_sample(model, 5, derive_seed(2000, trial));
    for (int u = 1; u <= 5; ++u) {
      MultilinearPolynomial pu = derive_pu(model.poly, u);
      for (int l = 1; l <= 2; ++l) {
        std::set<Monomial> maximal_above;
        for (const Monomial& I : maximal_monomials(pu)) {
          if (static_cast<int>(I.size()) > l && !I.empty()) {
            maximal_above.insert(I);
          }
        }
        SetFamily fam = build_JWF(maximal_above, 5, u, l, 3);
        InputUnitaryReport report = input_unitary_check(fam, s, 0);
        CHECK(report.ok());
      }
    }
  }
}
