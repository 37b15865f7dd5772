#include "lanedet/evaluation.hpp"

#include "lanedet/rng.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

using namespace lanedet;
using namespace testsupport;

using Labels = std::vector<std::int32_t>;

TEST_CASE("identical partitions score 1, regardless of label names") {
  const Labels a{0, 0, 1, 1, 2, 2};
  const Labels renamed{7, 7, -3, -3, 40, 40};
  CHECK(nmi(a, a) == doctest::Approx(1.0));
  CHECK(nmi(a, renamed) == doctest::Approx(1.0));
}

TEST_CASE("independent partitions score 0") {
  // Every (row, column) combination appears once: MI is exactly zero.
  Labels rows, cols;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) {
      rows.push_back(r);
      cols.push_back(c);
    }
  }
  CHECK(nmi(rows, cols) == 0.0);
}

TEST_CASE("degenerate single-cluster rules") {
  const Labels single(5, 3);
  const Labels split{0, 0, 1, 1, 2};
  CHECK(nmi(single, single) == 1.0);     // both sides trivial
  CHECK(nmi(single, Labels(5, 9)) == 1.0);
  CHECK(nmi(single, split) == 0.0);      // exactly one side trivial
  CHECK(nmi(split, single) == 0.0);
  CHECK_THROWS_AS(nmi(Labels{}, Labels{}), std::exception);
  CHECK_THROWS_AS(nmi(Labels{0, 1}, Labels{0}), std::exception);
}

TEST_CASE("matches an entropy-based oracle on random labelings") {
  Rng rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = rng.range(2, 120);
    const int ka = rng.range(1, 8);
    const int kb = rng.range(1, 8);
    Labels a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = rng.range(0, ka - 1);
      b[i] = rng.range(0, kb - 1);
    }
    const double got = nmi(a, b);
    const double want = nmi_entropy_oracle(a, b);
    CHECK(std::abs(got - want) <= 1e-12);
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("bitwise symmetric and relabeling-invariant") {
  Rng rng(13);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = rng.range(10, 200);
    Labels a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = rng.range(0, 5);
      b[i] = rng.range(0, 5);
    }
    CHECK(nmi(a, b) == nmi(b, a));  // exact, not approximate

    // Relabel a through a random permutation of its label alphabet.
    std::vector<std::int32_t> perm{0, 1, 2, 3, 4, 5};
    rng.shuffle(perm);
    Labels a2(n);
    for (int i = 0; i < n; ++i) a2[i] = 1000 - perm[a[i]];
    CHECK(nmi(a2, b) == nmi(a, b));
  }
}

TEST_CASE("normalizations order as max <= mean <= sqrt") {
  Rng rng(17);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = rng.range(20, 150);
    Labels a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = rng.range(0, 6);
      b[i] = rng.range(0, 3);
    }
    const double by_max = nmi(a, b, NmiNorm::Max);
    const double by_sqrt = nmi(a, b, NmiNorm::Sqrt);
    const double by_mean = nmi(a, b, NmiNorm::Mean);
    // Denominators order sqrt <= mean <= max (AM-GM), so the scores reverse.
    CHECK(by_max <= by_mean + 1e-12);
    CHECK(by_mean <= by_sqrt + 1e-12);
  }
}

TEST_CASE("norm names parse and print") {
  CHECK(parse_nmi_norm("sqrt") == NmiNorm::Sqrt);
  CHECK(parse_nmi_norm("max") == NmiNorm::Max);
  CHECK(parse_nmi_norm("mean") == NmiNorm::Mean);
  CHECK(to_string(NmiNorm::Mean) == "mean");
  CHECK_THROWS_AS(parse_nmi_norm("geometric"), std::exception);
}

TEST_CASE("mean over timesteps") {
  CHECK(mean_nmi({0.5}) == doctest::Approx(0.5));
  CHECK(mean_nmi({1.0, 0.0, 0.5, 0.5}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(mean_nmi({}), std::exception);
}
