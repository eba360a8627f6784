#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mrfq/qsim/grover.hpp"

using namespace mrfq;
using namespace mrfq::qsim;

namespace {

// Closed-form success probability, the oracle for the amplitude recursion.
double closed_form(std::uint64_t k, std::uint64_t N, std::uint64_t t) {
  double theta = std::asin(std::sqrt(static_cast<double>(k) / N));
  double s = std::sin((2.0 * t + 1.0) * theta);
  return s * s;
}

}  // namespace

TEST_CASE("amplitude recursion equals the closed form") {
  for (std::uint64_t N : {4ULL, 16ULL, 64ULL, 256ULL, 1024ULL}) {
    for (std::uint64_t k :
         std::vector<std::uint64_t>{1, 2, 3, N / 4, N / 2, N}) {
      if (k == 0 || k > N) continue;
      for (std::uint64_t t = 0; t <= 12; ++t) {
        CHECK(grover_success_probability(k, N, t) ==
              Catch::Approx(closed_form(k, N, t)).margin(1e-10));
      }
    }
  }
  CHECK(grover_success_probability(0, 16, 5) == 0.0);
}

TEST_CASE("k = N succeeds with zero iterations") {
  CHECK(grover_success_probability(16, 16, 0) == Catch::Approx(1.0));
  Rng rng(1);
  auto all = [](std::uint64_t) { return true; };
  GroverResult res = grover_search(16, all, 16, 0.1, rng);
  REQUIRE(res.index.has_value());
}

TEST_CASE("k=1, N=4 reaches probability one after a single iteration") {
  CHECK(grover_success_probability(1, 4, 1) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("measured frequency within 3 sigma of the closed form") {
  Rng rng(31415);
  const int trials = 10000;
  for (auto [k, N, t] : std::vector<std::tuple<std::uint64_t, std::uint64_t,
                                               std::uint64_t>>{
           {1, 64, 3}, {4, 64, 1}, {2, 256, 5}, {8, 256, 2}}) {
    int hits = 0;
    for (int i = 0; i < trials; ++i) {
      if (grover_fixed_trial(k, N, t, rng)) ++hits;
    }
    double p = closed_form(k, N, t);
    double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(static_cast<double>(hits) / trials - p) <= 3.0 * sigma + 1e-9);
  }
}

TEST_CASE("search with unknown count meets its success probability") {
  Rng rng(777);
  const double rho = 0.1;
  const int trials = 1000;
  int found = 0;
  for (int i = 0; i < trials; ++i) {
    std::uint64_t N = 32 + rng() % 200;
    std::uint64_t k = 1 + rng() % 5;
    std::set<std::uint64_t> sols;
    while (sols.size() < k) sols.insert(rng() % N);
    auto indicator = [&](std::uint64_t x) { return sols.count(x) > 0; };
    GroverResult res = grover_search(N, indicator, k, rho, rng);
    if (res.index && sols.count(*res.index)) ++found;
  }
  CHECK(found >= static_cast<int>((1.0 - rho) * trials));
}

TEST_CASE("search on an empty solution set returns none within budget") {
  Rng rng(2);
  auto none = [](std::uint64_t) { return false; };
  GroverResult res = grover_search(64, none, 0, 0.25, rng);
  CHECK_FALSE(res.index.has_value());
  CHECK(res.oracle_applications > 0);
}

TEST_CASE("counting: exact and noisy paths") {
  Rng rng(3);
  auto indicator = [](std::uint64_t x) { return x % 7 == 0; };

  SECTION("exact mode always returns the true count") {
    for (int i = 0; i < 50; ++i) {
      CountResult res = quantum_count(100, indicator, 0.2, rng);
      CHECK(res.k == res.true_k);
    }
  }

  SECTION("all-ones indicator counts the whole domain") {
    auto all = [](std::uint64_t) { return true; };
    CountResult res = quantum_count(64, all, 0.2, rng);
    CHECK(res.k == 64);
  }

  SECTION("zero count is certain and costs sqrt(N)") {
    auto none = [](std::uint64_t) { return false; };
    QueryLedger ledger;
    CountResult res = quantum_count(256, none, 0.2, rng,
                                    CountNoise::flip_within_budget, &ledger);
    CHECK(res.k == 0);
    CHECK(res.oracle_applications == 16);
    CHECK(ledger.total().grover_iterations == 16);
  }

  SECTION("noisy mode is exact with frequency at least 1 - rho") {
    const double rho = 0.2;
    const int trials = 5000;
    int exact = 0;
    for (int i = 0; i < trials; ++i) {
      CountResult res = quantum_count(100, indicator, rho, rng,
                                      CountNoise::flip_within_budget);
      if (res.k == res.true_k) ++exact;
    }
    CHECK(exact >= static_cast<int>((1.0 - rho) * trials));
  }
}

TEST_CASE("counting cost scales as sqrt(N) at fixed k") {
  Rng rng(4);
  std::vector<double> xs, ys;
  for (int p = 6; p <= 14; ++p) {
    std::uint64_t N = std::uint64_t{1} << p;
    // plant exactly 4 solutions
    auto indicator = [N](std::uint64_t x) { return x < 4; };
    CountResult res = quantum_count(N, indicator, 0.1, rng);
    xs.push_back(static_cast<double>(N));
    ys.push_back(static_cast<double>(res.oracle_applications));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double n = static_cast<double>(xs.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == Catch::Approx(0.5).margin(0.1));
}

TEST_CASE("oracle cost hooks charge the ledger per application") {
  Rng rng(5);
  QueryLedger ledger;
  OracleCost cost{10, 4};
  auto indicator = [](std::uint64_t x) { return x == 3; };
  GroverResult res =
      grover_search(64, indicator, 1, 0.2, rng, &ledger, "search", cost);
  REQUIRE(res.index.has_value());
  CHECK(ledger.total().grover_iterations == res.oracle_applications);
  CHECK(ledger.total().qram_queries == 10 * res.oracle_applications);
  CHECK(ledger.total().sample_oracle_queries == 4 * res.oracle_applications);
}
