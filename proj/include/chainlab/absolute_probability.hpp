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

// Absolute probability sequences: pi(t)^T = pi(t+1)^T A(t), pinned by a
// terminal vector at time T and propagated backwards. On a finite window
// every verdict here is horizon-bounded evidence about the infinite chain.

#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "chainlab/bounds.hpp"
#include "chainlab/chain.hpp"

namespace chainlab {

struct ApsTrace {
  Index t0 = 0;
  Index terminal_time = 0;
  Vector terminal;
  /// values[k] = pi(t0 + k) for k in [0, T - t0].
  std::vector<Vector> values;
  /// max_t || pi(t)^T - pi(t+1)^T A(t) ||_1, recomputed after the fact.
  double residual = 0.0;
  /// step_residuals[k] is the residual of the step from t0 + k + 1 to t0 + k.
  std::vector<double> step_residuals;
  /// max_t |1^T pi(t) - 1|.
  double mass_drift = 0.0;
  /// min over t, i of pi_i(t).
  double p_star = 0.0;

  const Vector& at(Index t) const { return values.at(static_cast<std::size_t>(t - t0)); }

  /// TSV rows: t, pi_1..pi_n, residual of the step that produced pi(t).
  void write_tsv(std::ostream& os) const;
};

Vector uniform_vector(int n);
Vector basis_vector(int n, int i);

ApsTrace aps_backward(const ChainWindow& chain, Index t0, Index terminal_time,
                      const Vector& terminal);

/// For each horizon T, the largest pairwise l1 distance between the pi(t0)
/// obtained from the n basis terminal vectors e_1..e_n.
std::vector<double> uniqueness_diagnostic(const ChainWindow& chain, Index t0,
                                          const std::vector<Index>& horizons);

struct PStarVerdict {
  double gamma = 0.0;
  /// beta_required at p0 over [t0, horizon).
  double beta = 0.0;
  bool beta_bounded = true;
  std::optional<EtaValue> eta_theoretical;
  /// min over the doubled-horizon traces of min_t,i pi_i(t).
  double p_star_empirical = 0.0;
  /// (T, p_star) for T, 2T, 4T measured from t0.
  std::vector<std::pair<Index, double>> p_star_trend;
  bool p_star_stable = false;
  bool in_pstar = false;
};

/// Horizon doubling ratio below which p_star counts as decaying.
inline constexpr double kPStarDecayRatio = 0.5;

PStarVerdict class_pstar_verdict(const ChainWindow& chain, double p0, Index horizon,
                                 const std::optional<Vector>& terminal = std::nullopt);

struct ErgodicityResult {
  bool ergodic_on_horizon = false;
  /// Max pairwise l1 distance between rows of A(horizon:t0).
  double row_spread = 0.0;
  Vector pi_t0;  // column means of A(horizon:t0); empty when not ergodic
};

ErgodicityResult ergodicity_check(const ChainWindow& chain, Index t0, Index horizon,
                                  double tol);

/// Max pairwise l1 distance between rows of m.
double max_row_spread(const Matrix& m);

}  // namespace chainlab
