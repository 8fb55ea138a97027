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

// Averaging dynamics x(t+1) = A(t) x(t), mutual ergodicity and the epoch
// contraction bound for the weighted quadratic comparison function.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "chainlab/absolute_probability.hpp"
#include "chainlab/chain.hpp"

namespace chainlab {

inline constexpr std::uint64_t kDefaultTrialSeed = 0x7a11'5eed'0000'0001ULL;

struct Trajectory {
  Index t0 = 0;
  /// states[k] = x(t0 + k).
  std::vector<Vector> states;

  Index end() const { return t0 + static_cast<Index>(states.size()) - 1; }
  const Vector& at(Index t) const { return states.at(static_cast<std::size_t>(t - t0)); }

  /// Rows t, x_1..x_n and, when aps is given, V_{pi(t)}(x(t)).
  void write_tsv(std::ostream& os, const ApsTrace* aps = nullptr) const;
};

/// States from t0 through T. For stochastic chains the max-min envelope is
/// checked at every step; a violation is an internal error.
Trajectory simulate(const ChainWindow& chain, Index t0, const Vector& x0, Index T);

struct MutualErgodicity {
  bool holds = true;
  double worst_gap = 0.0;
  Index witness_t0 = 0;
  Vector witness_x0;
};

/// |x_i(T) - x_j(T)| <= tol over seeded trials with random start time in the
/// first half of [chain t0, T) and x0 uniform on [-1, 1]^n. Trial 0 uses the
/// chain start and x0 = e_i. Indices are 0-based.
MutualErgodicity mutual_ergodicity(const ChainWindow& chain, int i, int j, int trials,
                                   Index T, double tol,
                                   std::uint64_t seed = kDefaultTrialSeed);

/// V_u(x) = sum_i u_i (x_i - u^T x)^2.
double quadratic_comparison(const Vector& u, const Vector& x);

enum class FlowMode { kCrossFlow, kLiteral };

std::string_view to_string(FlowMode m);
FlowMode parse_flow_mode(std::string_view s);

struct EpochSchedule {
  Index t0 = 0;
  std::vector<Index> times;
  FlowMode mode = FlowMode::kCrossFlow;
  bool exhaustive = true;
  /// Empty unless no epoch completed.
  std::string diagnostic;
};

/// Greedy epochs t_1 < t_2 < ... <= horizon: t_q is the first time the
/// quantity accumulated over [t_{q-1}, t_q) reaches delta for every cut.
/// Cross-flow accumulates 1^T A_{Sbar S} 1, literal accumulates 1^T A_S 1.
EpochSchedule epoch_times(const ChainWindow& chain, double delta, Index horizon,
                          FlowMode mode = FlowMode::kCrossFlow);

struct ContractionResult {
  /// Worst ratio over trials of V at t_q to V at t_{q-1}, per epoch; NaN
  /// where every trial had already collapsed.
  std::vector<double> per_epoch_ratio;
  /// 1 - eps delta (1 - delta)^2 gamma p_star / (n - 1)^2.
  double bound = 1.0;
  bool holds = true;
  /// bound - max ratio, over epochs with a measurable ratio.
  double slack = 0.0;
  std::string diagnostic;
};

/// Simulates seeded trials from x(aps.t0) uniform on [-1, 1]^n and compares
/// V_{pi(t_q)}(x(t_q)) across consecutive epochs against the bound. Epochs
/// where V has already collapsed to rounding level are skipped.
ContractionResult contraction_check(const ChainWindow& chain, const ApsTrace& aps,
                                    const std::vector<Index>& epochs, double gamma,
                                    double p_star, double delta, double eps = 1.0,
                                    int trials = 32,
                                    std::uint64_t seed = kDefaultTrialSeed);

}  // namespace chainlab
