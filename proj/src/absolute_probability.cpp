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

#include "chainlab/absolute_probability.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include "chainlab/error.hpp"
#include "chainlab/parallel.hpp"
#include "chainlab/reciprocity.hpp"

namespace chainlab {

namespace {

// Stochasticity of pi(t) is checked against this, scaled by the number of
// propagation steps.
constexpr double kApsMassTol = 1e-12;

// Floor applied to a measured beta of 0 before evaluating eta_n, whose
// domain excludes 0; eta_n is nonincreasing in beta so the bound stays valid.
constexpr double kBetaFloor = 1e-9;

}  // namespace

void ApsTrace::write_tsv(std::ostream& os) const {
  const std::size_t n = terminal.size();
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << "\tpi_" << (i + 1);
  os << "\tresidual\n";
  os << std::setprecision(17);
  for (std::size_t k = 0; k < values.size(); ++k) {
    os << (t0 + static_cast<Index>(k));
    for (double v : values[k]) os << '\t' << v;
    os << '\t' << (k < step_residuals.size() ? step_residuals[k] : 0.0) << '\n';
  }
}

Vector uniform_vector(int n) {
  return Vector(static_cast<std::size_t>(n), 1.0 / n);
}

Vector basis_vector(int n, int i) {
  Vector e(static_cast<std::size_t>(n), 0.0);
  e.at(static_cast<std::size_t>(i)) = 1.0;
  return e;
}

ApsTrace aps_backward(const ChainWindow& chain, Index t0, Index terminal_time,
                      const Vector& terminal) {
  require(t0 >= chain.t0() && t0 <= terminal_time, ErrorKind::kIndexOutOfRange,
          "aps needs chain start <= t0 <= T");
  require(chain.reaches(terminal_time), ErrorKind::kIndexOutOfRange,
          "terminal time beyond chain window with no extension rule");
  require(static_cast<int>(terminal.size()) == chain.dim(),
          ErrorKind::kDimensionMismatch, "terminal vector length mismatch");
  require(is_stochastic_vector(terminal), ErrorKind::kNotStochastic,
          "terminal vector is not stochastic");

  const auto steps = static_cast<std::size_t>(terminal_time - t0);
  const auto matrices = chain.materialize(t0, terminal_time);
  for (const auto& m : matrices) require_stochastic(m);

  ApsTrace trace;
  trace.t0 = t0;
  trace.terminal_time = terminal_time;
  trace.terminal = terminal;
  trace.values.assign(steps + 1, Vector{});
  trace.values[steps] = terminal;
  for (std::size_t k = steps; k-- > 0;) {
    trace.values[k] = left_multiply(trace.values[k + 1], matrices[k]);
  }

  const int n = chain.dim();
  double p_star = std::numeric_limits<double>::infinity();
  for (const auto& v : trace.values) {
    trace.mass_drift = std::max(trace.mass_drift, std::abs(sum(v) - 1.0));
    for (double x : v) p_star = std::min(p_star, x);
  }
  trace.p_star = p_star;
  // Recompute each step column by column, independently of left_multiply.
  trace.step_residuals.assign(steps, 0.0);
  for (std::size_t k = 0; k < steps; ++k) {
    double r = 0.0;
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += trace.values[k + 1][static_cast<std::size_t>(i)] * matrices[k](i, j);
      r += std::abs(trace.values[k][static_cast<std::size_t>(j)] - s);
    }
    trace.step_residuals[k] = r;
    trace.residual = std::max(trace.residual, r);
  }
  const double tol = kApsMassTol * static_cast<double>(steps + 1) * n + kTolStoch;
  require(trace.mass_drift <= tol, ErrorKind::kInternal,
          "absolute probability vector lost stochasticity");
  return trace;
}

std::vector<double> uniqueness_diagnostic(const ChainWindow& chain, Index t0,
                                          const std::vector<Index>& horizons) {
  require(std::is_sorted(horizons.begin(), horizons.end()), ErrorKind::kInvalidInput,
          "horizons must be increasing");
  const int n = chain.dim();
  std::vector<double> spreads;
  spreads.reserve(horizons.size());
  for (Index T : horizons) {
    std::vector<Vector> starts(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
      starts[i] = aps_backward(chain, t0, T, basis_vector(n, static_cast<int>(i))).values.front();
    });
    double spread = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        spread = std::max(spread, l1_distance(starts[static_cast<std::size_t>(a)],
                                              starts[static_cast<std::size_t>(b)]));
    spreads.push_back(spread);
  }
  return spreads;
}

PStarVerdict class_pstar_verdict(const ChainWindow& chain, double p0, Index horizon,
                                 const std::optional<Vector>& terminal) {
  const Index t0 = chain.t0();
  require(horizon > t0, ErrorKind::kDomain, "horizon must exceed chain start");
  const Index span = horizon - t0;
  const Index longest = t0 + 4 * span;
  require(chain.reaches(longest), ErrorKind::kIndexOutOfRange,
          "P* verdict doubles the horizon twice; chain must reach " +
              std::to_string(longest));
  const int n = chain.dim();
  const Vector pin = terminal.value_or(uniform_vector(n));

  PStarVerdict out;
  const auto matrices = chain.materialize(t0, longest);
  double gamma = std::numeric_limits<double>::infinity();
  for (const auto& m : matrices) {
    require_stochastic(m);
    gamma = std::min(gamma, m.min_diagonal());
  }
  out.gamma = gamma;

  if (span >= 2) {
    const auto trend = reciprocity_trend(chain, p0, horizon);
    out.beta = trend.full.beta_required;
    out.beta_bounded = trend.bounded;
  } else {
    out.beta = approximate_reciprocity_beta(chain, p0, horizon).beta_required;
  }

  out.p_star_empirical = std::numeric_limits<double>::infinity();
  for (Index factor : {1, 2, 4}) {
    const Index T = t0 + factor * span;
    const double p = aps_backward(chain, t0, T, pin).p_star;
    out.p_star_trend.emplace_back(T, p);
    out.p_star_empirical = std::min(out.p_star_empirical, p);
  }
  const double first = out.p_star_trend.front().second;
  const double last = out.p_star_trend.back().second;
  out.p_star_stable = last > 0.0 && last >= kPStarDecayRatio * first;

  if (gamma > 0.0 && gamma < 1.0 && p0 > 0.0 && p0 < 1.0 && n <= kMaxEtaDim) {
    out.eta_theoretical = eta_n({n, gamma, p0, std::max(out.beta, kBetaFloor), 0.0});
  }
  out.in_pstar = gamma > 0.0 && out.beta_bounded && out.p_star_stable;
  return out;
}

double max_row_spread(const Matrix& m) {
  double spread = 0.0;
  for (int a = 0; a < m.rows(); ++a)
    for (int b = a + 1; b < m.rows(); ++b)
      spread = std::max(spread, l1_distance(m.row(a), m.row(b)));
  return spread;
}

ErgodicityResult ergodicity_check(const ChainWindow& chain, Index t0, Index horizon,
                                  double tol) {
  const Matrix p = backward_product(chain, t0, horizon);
  ErgodicityResult out;
  out.row_spread = max_row_spread(p);
  out.ergodic_on_horizon = out.row_spread <= tol;
  if (out.ergodic_on_horizon) {
    const int n = p.dim();
    out.pi_t0.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.pi_t0[static_cast<std::size_t>(j)] += p(i, j) / n;
  }
  return out;
}

}  // namespace chainlab
