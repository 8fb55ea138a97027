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
#include <numbers>

#include "chainlab/bounds.hpp"
#include "chainlab/error.hpp"
#include "support/testing.hpp"

using namespace chainlab;
namespace ct = chainlab::testing;

namespace {

const Matrix kHalf{{0.5, 0.5}, {0.5, 0.5}};

// Second transcription of eta_n written straight from the product formula
// eta_F = (m^n * m^2 / 2 * min(1/n^2, m/2))^n * m^n * exp(-M(gamma) delta),
// with m = min(eta_B, eta_C). Linear space, no memo.
double eta_linear(int n, double gamma, double p0, double beta, double delta) {
  const double rate = std::log(1.0 / gamma) / (1.0 - gamma);
  if (n == 1) return std::exp(-rate * delta);
  double eb = 1.0, ec = 1.0;
  for (int r = 1; r < n; ++r) {
    eb = std::min(eb, eta_linear(r, gamma, p0, beta + 2 * n, delta + 2 * n));
    const double shift = (2 * n + beta) / p0;
    ec = std::min(ec, eta_linear(r, gamma, p0, beta + shift, delta + shift));
  }
  const double m = std::min(eb, ec);
  const double d = std::min(1.0 / (n * n), m / 2);
  return std::pow(std::pow(m, n) * m * m / 2 * d, n) * std::pow(m, n) * std::exp(-rate * delta);
}

// Same formula in log space, for dimensions where the linear value underflows.
double eta_log(int n, double gamma, double p0, double beta, double delta) {
  const double rate = std::log(1.0 / gamma) / (1.0 - gamma);
  if (n == 1) return -rate * delta;
  double lm = 0.0;
  for (int r = 1; r < n; ++r) {
    const double shift = (2 * n + beta) / p0;
    lm = std::min({lm, eta_log(r, gamma, p0, beta + 2 * n, delta + 2 * n),
                   eta_log(r, gamma, p0, beta + shift, delta + shift)});
  }
  const double ld = std::min(-std::log(static_cast<double>(n * n)), lm - std::log(2.0));
  const double inner = n * lm + 2 * lm - std::log(2.0) + ld;
  return n * inner + n * lm - rate * delta;
}

}  // namespace

TEST_CASE("M(eps)") {
  CHECK(m_of_eps(0.5) == doctest::Approx(2.0 * std::numbers::ln2).epsilon(1e-15));
  CHECK(m_of_eps(0.5) == doctest::Approx(1.386294).epsilon(1e-6));
  CHECK(std::abs(m_of_eps(0.999) - 1.0) < 1e-2);
  CHECK(m_of_eps(1.0 / std::numbers::e) ==
        doctest::Approx(std::numbers::e / (std::numbers::e - 1.0)).epsilon(1e-14));
  CHECK(m_of_eps(1.0 / std::numbers::e) == doctest::Approx(1.581977).epsilon(1e-6));
  CHECK_THROWS_AS(m_of_eps(0.0), Error);
  CHECK_THROWS_AS(m_of_eps(1.0), Error);
}

TEST_CASE("property: exponential lower bound on [0, 1 - eps]") {
  CounterRng rng(3, 0);
  for (int k = 0; k < 10000; ++k) {
    const double eps = 1e-6 + (1.0 - 2e-6) * rng.uniform();
    const double x = (1.0 - eps) * rng.uniform();
    const double lhs = 1.0 - x;
    const double rhs = std::exp(-m_of_eps(eps) * x);
    CHECK(lhs >= std::nextafter(rhs, 0.0));
  }
}

TEST_CASE("path bound") {
  CHECK(lemma4_path_bound(1.0, 1.0, 0.5) == 0.25);
  CHECK(lemma4_path_bound(0.5, 0.8, 0.4) == doctest::Approx(0.08).epsilon(1e-15));
  CHECK(std::abs(lemma4_path_bound(0.9, 0.9, 0.89) - 0.360) < 5e-4);
  CHECK_THROWS_AS(lemma4_path_bound(1.0, 0.5, 0.5), Error);
  CHECK_THROWS_AS(lemma4_path_bound(1.0, 0.5, 0.0), Error);
  CHECK_THROWS_AS(lemma4_path_bound(0.0, 0.5, 0.1), Error);
}

// Each sequence is random substochastic with a heavy diagonal. The
// constants are then measured from the sequence itself: eta_i is the least
// B_ii over windows ending by t_L, eta_j the least B_jj over all windows,
// and delta = min(sum of B_ji, 0.999 eta_j), so all three hypotheses hold
// by construction.
TEST_CASE("property: path bound on synthesized sequences") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    CounterRng rng(seed, 21);
    const int n = 2 + static_cast<int>(rng.below(3));
    const int sigma = 1 + static_cast<int>(rng.below(12));
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int j = (i + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)))) % n;
    std::vector<Matrix> bs;
    for (int t = 0; t < sigma; ++t) {
      Matrix b = ct::random_substochastic(rng, n, 0.1, 0.7);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) b(r, c) *= r == c ? 1.0 : 0.3;
        b(r, r) += 0.7 * (1.0 - b.row_sum(r));
      }
      if (rng.uniform() < 0.3) b(j, i) = 0.0;
      bs.push_back(b);
    }
    const ChainWindow chain(0, bs);
    int t_last = -1;
    double total = 0.0;
    for (int t = 0; t < sigma; ++t) {
      if (bs[static_cast<std::size_t>(t)](j, i) > 0.0) t_last = t;
      total += bs[static_cast<std::size_t>(t)](j, i);
    }
    if (t_last < 0) continue;
    double eta_i = 1.0, eta_j = 1.0;
    for (int t0 = 0; t0 <= sigma; ++t0) {
      for (int t1 = t0; t1 <= sigma; ++t1) {
        const Matrix p = backward_product(chain, t0, t1);
        if (t1 <= t_last) eta_i = std::min(eta_i, p(i, i));
        eta_j = std::min(eta_j, p(j, j));
      }
    }
    const double delta = std::min(total, 0.999 * eta_j);
    const double lhs = backward_product(chain, 0, sigma)(j, i);
    CHECK(lhs >= lemma4_path_bound(eta_i, eta_j, delta));
    ++checked;
  }
  CHECK(checked > 900);
}

TEST_CASE("eta_n base cases") {
  CHECK(eta_n({1, 0.3, 0.4, 7.0, 0.0}).value == 1.0);
  CHECK(eta_n({1, 0.5, 0.5, 1.0, 1.0}).value == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("eta_2 agrees with an independent transcription") {
  const EtaValue v = eta_n({2, 0.5, 0.5, 1.0, 0.0});
  const double oracle = eta_linear(2, 0.5, 0.5, 1.0, 0.0);
  CHECK(std::abs(v.value - oracle) <= 1e-12 * oracle);
  CHECK_FALSE(v.underflow);
  // With gamma = 1/2 every factor is a power of two: m = 2^-20, the step
  // is 2^-21, and eta_2 = (2^-40 * 2^-40 / 2 * 2^-21)^2 * 2^-40 = 2^-244.
  CHECK(v.log_value == doctest::Approx(-244.0 * std::numbers::ln2).epsilon(1e-13));
  CHECK(v.value == doctest::Approx(3.5373746401666841e-74).epsilon(1e-12));
}

TEST_CASE("eta_n agrees with the log transcription for larger n") {
  for (int n = 2; n <= 5; ++n) {
    for (double gamma : {0.2, 0.6}) {
      for (double beta : {0.5, 3.0}) {
        const double lhs = eta_n({n, gamma, 0.4, beta, 0.7}).log_value;
        const double rhs = eta_log(n, gamma, 0.4, beta, 0.7);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
    }
  }
  CHECK(eta_n({4, 0.5, 0.5, 1.0, 0.0}).underflow);
  CHECK(std::isfinite(eta_n({kMaxEtaDim, 0.5, 0.5, 1.0, 0.0}).log_value));
}

TEST_CASE("eta_n domain") {
  CHECK_THROWS_AS(eta_n({0, 0.5, 0.5, 1.0, 0.0}), Error);
  CHECK_THROWS_AS(eta_n({kMaxEtaDim + 1, 0.5, 0.5, 1.0, 0.0}), Error);
  CHECK_THROWS_AS(eta_n({2, 1.0, 0.5, 1.0, 0.0}), Error);
  CHECK_THROWS_AS(eta_n({2, 0.5, 1.0, 1.0, 0.0}), Error);
  CHECK_THROWS_AS(eta_n({2, 0.5, 0.5, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(eta_n({2, 0.5, 0.5, 1.0, -1.0}), Error);
}

TEST_CASE("property: eta_n monotonicity grid") {
  int points = 0;
  for (double gamma : {0.3, 0.5, 0.8}) {
    for (double p0 : {0.3, 0.5, 0.8}) {
      for (double beta : {0.5, 1.0, 4.0}) {
        ++points;
        const double delta = 0.5;
        for (int n = 1; n <= 4; ++n) {
          const double here = eta_n({n, gamma, p0, beta, delta}).log_value;
          if (n < 4) CHECK(eta_n({n + 1, gamma, p0, beta, delta}).log_value <= here);
          CHECK(eta_n({n, gamma, p0, beta * 2, delta}).log_value <= here);
          CHECK(eta_n({n, gamma, p0, beta, delta + 1}).log_value <= here);
          CHECK(eta_n({n, std::min(0.95, gamma + 0.1), p0, beta, delta}).log_value >= here);
          CHECK(eta_n({n, gamma, std::min(0.95, p0 + 0.1), beta, delta}).log_value >= here);
        }
      }
    }
  }
  CHECK(points == 27);
}

TEST_CASE("product lower bound examples") {
  const auto id = ChainWindow(0, {Matrix::identity(3)}, Extension::kIdentity);
  CHECK(verify_product_lower_bound(id, 1.0, 10).holds);
  const auto half = ChainWindow::constant(kHalf, 1);
  const auto ok = verify_product_lower_bound(half, 0.5, 10);
  CHECK(ok.holds);
  CHECK(ok.worst.value == 0.5);
  const auto bad = verify_product_lower_bound(half, 0.51, 10);
  CHECK_FALSE(bad.holds);
  CHECK(bad.worst.value == 0.5);
  CHECK(bad.worst.t2 == bad.worst.t1 + 1);
  CHECK(verify_product_lower_bound_log(half, std::log(0.5), 10).holds);
  CHECK_FALSE(verify_product_lower_bound_log(half, std::log(0.51), 10).holds);
}

TEST_CASE("product scan matches a direct window search") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CounterRng rng(seed, 22);
    const int n = 2 + static_cast<int>(rng.below(3));
    const auto c = ct::random_chain(rng, n, 12, 0.8, 0.2);
    double worst = 1.0;
    for (Index a = 0; a <= 12; ++a)
      for (Index b = a; b <= 12; ++b) {
        const auto p = ct::oracle_product(c, a, b);
        for (int i = 0; i < n; ++i) worst = std::min(worst, p[i][i]);
      }
    CHECK(verify_product_lower_bound(c, 0.0, 12).worst.value ==
          doctest::Approx(worst).epsilon(1e-13));
  }
}
