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

// Continuous-time averaging x'(t) = A(t) x(t) with A(t) = -L(t) piecewise
// constant. Transition matrices are exact per-segment exponentials, so every
// integral below is closed form.

#pragma once

#include <optional>
#include <vector>

#include "chainlab/chain.hpp"
#include "chainlab/flow_graph.hpp"
#include "chainlab/reciprocity.hpp"

namespace chainlab {

/// Row-sum tolerance for generators and transition matrices.
inline constexpr double kTolCt = 1e-10;
/// Negative entries of Phi down to this are clamped to zero.
inline constexpr double kClampCt = 1e-12;

struct CtSegment {
  double duration = 0.0;
  /// Nonnegative off-diagonals, zero row sums.
  Matrix generator;
};

/// Segments laid end to end from time 0, plus an increasing sample grid.
class CtChain {
 public:
  CtChain(std::vector<CtSegment> segments, std::vector<double> grid = {});

  int dim() const { return dim_; }
  double end() const { return breakpoints_.back(); }
  const std::vector<CtSegment>& segments() const { return segments_; }
  /// 0, d_1, d_1 + d_2, ...
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& grid() const { return grid_; }

  CtChain with_grid(std::vector<double> grid) const;

  /// Integral of A over [a, b].
  Matrix integral(double a, double b) const;

 private:
  int dim_;
  std::vector<CtSegment> segments_;
  std::vector<double> breakpoints_;
  std::vector<double> grid_;
};

void validate_generator(const Matrix& g, double tol = kTolCt);

/// exp(m) by scaling and squaring with a fixed degree-13 Pade approximant.
Matrix expm(const Matrix& m);

struct TransitionOperator {
  double tau = 0.0;
  double t = 0.0;
  Matrix matrix;
  /// Number of segment exponentials composed.
  int step_count = 0;
  /// Largest |row sum - 1| over the composed exponentials.
  double max_local_error = 0.0;
  /// Entries in [-kClampCt, 0) reset to zero.
  int clamped = 0;
};

/// Phi(t, tau) for 0 <= tau <= t <= end.
TransitionOperator transition(const CtChain& chain, double tau, double t);

/// B(k) = Phi(t_{k+1}, t_k) over the grid, as a chain indexed from 0. The
/// product of all B(k) is checked against Phi(t_last, t_first).
ChainWindow sample_discrete(const CtChain& chain);

/// max over grid intervals k and i != j of the integral of a_ij.
double uniform_bound_M(const CtChain& chain);

/// Reciprocity scan over grid-index windows of the integrated cut flows.
/// Window indices in the certificate refer to grid intervals.
ReciprocityCertificate ct_reciprocity_beta(const CtChain& chain, double p0);

struct SandwichResult {
  /// min over k with positive integral of Phi-flow / integral-flow.
  std::optional<double> g_empirical;
  bool upper_ok = true;
  std::vector<double> phi_flow;
  std::vector<double> integral_flow;
};

/// Per grid interval, 1^T Phi_{S Sbar}(t_{k+1}, t_k) 1 against
/// the integral of 1^T A_{S Sbar} 1 and n times it.
SandwichResult sandwich_check(const CtChain& chain, const SubsetCut& cut);

/// Flow graph with weight(i, j) = integral of a_ij + a_ji over the grid.
/// Horizon and slope are in grid intervals.
FlowGraph ct_flow_graph(const CtChain& chain, double threshold = kDefaultFlowThreshold);

}  // namespace chainlab
