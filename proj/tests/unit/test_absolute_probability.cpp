// Copyright 2026 The chainlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "chainlab/absolute_probability.hpp"
#include "chainlab/error.hpp"
#include "chainlab/random_chains.hpp"
#include "chainlab/reciprocity.hpp"
#include "support/testing.hpp"

using namespace chainlab;
namespace ct = chainlab::testing;

namespace {

const Matrix kHalf{{0.5, 0.5}, {0.5, 0.5}};
const Matrix kLower{{1.0, 0.0}, {0.5, 0.5}};
const Matrix kSlow{{0.9, 0.1}, {0.1, 0.9}};

}  // namespace

TEST_CASE("aps examples") {
  SUBCASE("doubly stochastic chain keeps the uniform vector") {
    const Matrix m{{0.6, 0.3, 0.1}, {0.1, 0.6, 0.3}, {0.3, 0.1, 0.6}};
    const auto tr = aps_backward(ChainWindow::constant(m, 1), 0, 40, uniform_vector(3));
    for (const auto& v : tr.values)
      for (double x : v) CHECK(x == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("one-directional chain has a geometric tail") {
    for (Index k : {1, 5, 20}) {
      const auto tr = aps_backward(ChainWindow::constant(kLower, 1), 0, k, {0.5, 0.5});
      const double tail = std::pow(0.5, static_cast<double>(k + 1));
      CHECK(tr.at(0)[1] == tail);
      CHECK(tr.at(0)[0] == 1.0 - tail);
      CHECK(tr.p_star == tail);
    }
  }
  SUBCASE("identity keeps the terminal vector") {
    const Vector term{0.2, 0.5, 0.3};
    const auto tr = aps_backward(ChainWindow(0, {Matrix::identity(3)}, Extension::kIdentity),
                                 2, 9, term);
    CHECK(tr.values.size() == 8);
    for (const auto& v : tr.values) CHECK(v == term);
    CHECK(tr.residual == 0.0);
  }
}

TEST_CASE("aps errors") {
  const auto c = ChainWindow::constant(kHalf, 1);
  CHECK_THROWS_AS(aps_backward(c, 0, 3, {0.5, 0.6}), Error);
  CHECK_THROWS_AS(aps_backward(c, 0, 3, {1.0}), Error);
  CHECK_THROWS_AS(aps_backward(ChainWindow(0, {Matrix{{0.9, 0.0}, {0.0, 1.0}}}), 0, 1,
                               {0.5, 0.5}),
                  Error);
  CHECK_THROWS_AS(aps_backward(ChainWindow(0, {kHalf}), 0, 2, {0.5, 0.5}), Error);
}

TEST_CASE("property: recursion residual stays at rounding level") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    CounterRng rng(seed, 30);
    const int n = 2 + static_cast<int>(rng.below(15));
    const Index h = 100 + static_cast<Index>(rng.below(901));
    const auto c = ct::random_chain(rng, n, h, 0.5);
    const auto tr = aps_backward(c, 0, h, uniform_vector(n));
    CHECK(tr.residual <= 1e-12);
    CHECK(tr.mass_drift <= 1e-12);
    CHECK(tr.p_star >= 0.0);
    CHECK(tr.p_star <= 1.0 / n + 1e-15);
  }
}

TEST_CASE("property: pi(t) equals the terminal times the backward product") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CounterRng rng(seed, 31);
    const int n = 2 + static_cast<int>(rng.below(5));
    const auto c = ct::random_chain(rng, n, 25, 0.7);
    const Vector term = basis_vector(n, static_cast<int>(rng.below(static_cast<std::uint64_t>(n))));
    const auto tr = aps_backward(c, 0, 25, term);
    for (Index t = 0; t <= 25; t += 5) {
      const auto p = ct::oracle_product(c, t, 25);
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += term[i] * p[i][j];
        CHECK(tr.at(t)[j] == doctest::Approx(s).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("uniqueness diagnostic examples") {
  const auto half = uniqueness_diagnostic(ChainWindow::constant(kHalf, 1), 0, {1, 5, 10});
  for (double s : half) CHECK(s == 0.0);
  const auto id = uniqueness_diagnostic(
      ChainWindow(0, {Matrix::identity(3)}, Extension::kIdentity), 0, {1, 10, 100});
  for (double s : id) CHECK(s == 2.0);
  const auto slow = uniqueness_diagnostic(ChainWindow::constant(kSlow, 1), 0, {10, 20, 40});
  const Index hs[] = {10, 20, 40};
  for (std::size_t k = 0; k < 3; ++k) {
    const double oracle = 2.0 * std::pow(0.8, static_cast<double>(hs[k]));
    CHECK(slow[k] == doctest::Approx(oracle).epsilon(1e-10));
  }
  CHECK(slow[0] == doctest::Approx(0.2147483648).epsilon(1e-9));
  CHECK_THROWS_AS(uniqueness_diagnostic(ChainWindow::constant(kHalf, 1), 0, {10, 5}), Error);
}

TEST_CASE("P* verdict examples") {
  SUBCASE("averaging chain") {
    const auto v = class_pstar_verdict(ChainWindow::constant(kHalf, 1), 0.5, 20);
    CHECK(v.gamma == 0.5);
    CHECK(v.beta == 0.0);
    CHECK(v.p_star_empirical == 0.5);
    CHECK(v.in_pstar);
    REQUIRE(v.eta_theoretical.has_value());
  }
  SUBCASE("one-directional chain") {
    const auto v = class_pstar_verdict(ChainWindow::constant(kLower, 1), 0.5, 20);
    CHECK_FALSE(v.beta_bounded);
    CHECK(v.beta > 0.0);
    CHECK(v.p_star_trend.size() == 3);
    CHECK(v.p_star_trend.back().second < v.p_star_trend.front().second);
    CHECK(v.p_star_empirical < 1e-20);
    CHECK_FALSE(v.p_star_stable);
    CHECK_FALSE(v.in_pstar);
  }
  SUBCASE("identity") {
    const auto v = class_pstar_verdict(
        ChainWindow(0, {Matrix::identity(4)}, Extension::kIdentity), 0.5, 10);
    CHECK(v.gamma == 1.0);
    CHECK(v.beta == 0.0);
    CHECK(v.p_star_empirical == 0.25);
    CHECK_FALSE(v.eta_theoretical.has_value());
  }
  SUBCASE("chain too short for horizon doubling") {
    CHECK_THROWS_AS(class_pstar_verdict(ChainWindow(0, {kHalf, kHalf}), 0.5, 2), Error);
  }
}

TEST_CASE("ergodicity examples") {
  const auto a = ergodicity_check(ChainWindow::constant(kHalf, 1), 0, 1, 1e-12);
  CHECK(a.ergodic_on_horizon);
  CHECK(a.pi_t0 == Vector{0.5, 0.5});
  const auto id = ChainWindow(0, {Matrix::identity(2)}, Extension::kIdentity);
  for (Index h : {1, 10, 1000}) CHECK_FALSE(ergodicity_check(id, 0, h, 1e-6).ergodic_on_horizon);
  // The row spread of A^h is the l1 distance 2 * 0.8^h, first <= 1e-6 at h = 66.
  const auto slow = ChainWindow::constant(kSlow, 1);
  CHECK_FALSE(ergodicity_check(slow, 0, 65, 1e-6).ergodic_on_horizon);
  CHECK(ergodicity_check(slow, 0, 66, 1e-6).ergodic_on_horizon);
  CHECK(ergodicity_check(slow, 0, 62, 1e-6).row_spread ==
        doctest::Approx(2.0 * std::pow(0.8, 62)).epsilon(1e-9));
}

TEST_CASE("property: telescoping bound at p0 = empirical p*") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorSpec spec{seed % 2 ? Family::kGossipPairs : Family::kLazyRandomWalk,
                       2 + static_cast<int>(seed % 3),
                       seed % 2 ? std::vector<double>{0.8, 0.5} : std::vector<double>{0.5, 0.6},
                       seed};
    const auto c = generate(spec, 240);
    const auto v = class_pstar_verdict(c, 0.5, 60);
    if (!v.in_pstar) continue;
    const auto cert = approximate_reciprocity_beta(c, v.p_star_empirical, 60);
    CHECK(cert.beta_required <= 1.0 + 1e-6);
  }
}

TEST_CASE("property: static irreducible chains recover the stationary vector") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CounterRng rng(seed, 32);
    const int n = 2 + static_cast<int>(rng.below(5));
    const Matrix m = ct::random_stochastic(rng, n, 0.6, 0.05);
    if (!static_equivalence_check(m).irreducible) continue;
    const auto tr = aps_backward(ChainWindow::constant(m, 1), 0, 2000, uniform_vector(n));
    const auto pi = ct::stationary_oracle(m);
    for (int i = 0; i < n; ++i) CHECK(tr.at(0)[i] == doctest::Approx(pi[i]).epsilon(1e-10));
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("aps TSV") {
  const auto tr = aps_backward(ChainWindow::constant(kHalf, 1), 0, 2, {1.0, 0.0});
  std::ostringstream os;
  tr.write_tsv(os);
  CHECK(os.str() == "t\tpi_1\tpi_2\tresidual\n0\t0.5\t0.5\t0\n1\t0.5\t0.5\t0\n2\t1\t0\t0\n");
}
