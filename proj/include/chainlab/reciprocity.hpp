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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chainlab/chain.hpp"

namespace chainlab {

/// Largest alpha in [0, 1] with 1^T A_{S Sbar}(t) 1 >= alpha 1^T A_{Sbar S}(t) 1
/// over every stored t and every scanned cut. A vanishing pair of flows
/// counts as ratio 1.
double cut_balance_alpha(const ChainWindow& chain);

/// Result of scanning p0 * sum(forward) <= sum(backward) + beta over every
/// cut and every window [t_start, t_end) inside [t0, horizon).
struct ReciprocityCertificate {
  double p0 = 0.0;
  double beta_required = 0.0;
  std::uint32_t witness_mask = 0;
  Index witness_start = 0;
  Index witness_end = 0;
  Index t0 = 0;
  Index horizon = 0;
  bool exhaustive = true;

  /// Key-value text block, one `key value` pair per line.
  std::string serialize() const;
};

/// Per-step flows of one cut: forward = 1^T A_{S Sbar} 1, backward =
/// 1^T A_{Sbar S} 1.
struct CutSeries {
  std::uint32_t mask = 0;
  std::vector<double> forward;
  std::vector<double> backward;
};

/// Maximum-sum window of p0 * forward[t] - backward[t] (Kadane scan, left to
/// right, so the window sums associate exactly like a direct loop).
struct WindowMax {
  double value = 0.0;
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive
};
WindowMax max_window_excess(double p0, std::span<const double> forward,
                            std::span<const double> backward);

/// Scan the per-cut series and return the certificate for the worst cut.
/// Windows are reported relative to `t0`.
ReciprocityCertificate certify_from_series(double p0, Index t0, Index horizon,
                                           const std::vector<CutSeries>& series,
                                           bool exhaustive);

ReciprocityCertificate approximate_reciprocity_beta(const ChainWindow& chain,
                                                    double p0, Index horizon);

/// beta_required at horizon/2 and at horizon; `bounded` is false when more
/// than a quarter of the final beta accrued in the second half, the
/// finite-window signature of linear growth.
struct ReciprocityTrend {
  ReciprocityCertificate half;
  ReciprocityCertificate full;
  bool bounded = true;
};
ReciprocityTrend reciprocity_trend(const ChainWindow& chain, double p0, Index horizon);
bool beta_growth_is_bounded(double beta_half, double beta_full);

struct StaticEquivalence {
  bool irreducible = false;
  bool reciprocal = false;
  bool flow_connected = false;
};

/// Irreducibility by strong connectivity of the positive-entry digraph,
/// checked against reciprocity plus flow-graph connectivity of the static
/// chain. Throws an internal error if the two verdicts disagree.
StaticEquivalence static_equivalence_check(const Matrix& m);

/// Strong connectivity of the digraph with an arc i -> j iff m(i, j) > 0.
bool strongly_connected(const Matrix& m);

}  // namespace chainlab
