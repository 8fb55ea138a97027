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

// Truncated infinite flow graphs, ergodic classes and jet interactions.
//
// Divergence of an infinite sum cannot be decided from a window, so an edge
// is declared present when its accumulated flow reaches `threshold` by
// `horizon`. Both numbers travel with the graph.

#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "chainlab/chain.hpp"

namespace chainlab {

inline constexpr double kDefaultFlowThreshold = 1.0;

using Partition = std::vector<std::vector<int>>;

struct FlowGraph {
  int n = 0;
  Index t0 = 0;
  Index horizon = 0;
  double threshold = kDefaultFlowThreshold;
  /// weight(i, j) = sum over [t0, horizon) of a_ij(t) + a_ji(t); symmetric.
  Matrix weight;
  /// Accumulated flow per step over the second half of the window.
  Matrix slope;

  bool edge(int i, int j) const { return i != j && weight(i, j) >= threshold; }

  /// Edge list TSV: i, j (1-based), weight, verdict, slope.
  void write_tsv(std::ostream& os) const;
};

FlowGraph build_flow_graph(const ChainWindow& chain, Index horizon,
                           double threshold = kDefaultFlowThreshold);

/// Flow graph from precomputed pairwise weights (continuous-time integrals
/// reuse this).
FlowGraph flow_graph_from_weights(Matrix weight, Matrix slope, Index t0,
                                  Index horizon, double threshold);

/// Components of the present-edge graph, each sorted, ordered by least member.
Partition connected_components(const FlowGraph& g);

/// Groups indices whose rows of m lie within l1 distance tol (transitively),
/// in the same canonical order as connected_components.
Partition group_rows(const Matrix& m, double tol);

struct ErgodicClasses {
  Partition classes;
  /// Grouping identical for every start time and products Cauchy along the
  /// doubling horizons.
  bool class_ergodic = false;
  bool grouping_stable = false;
  double cauchy_gap = 0.0;
  /// Flow-graph components at the same horizon and threshold.
  Partition flow_components;
  bool agrees_with_flow_graph = false;
};

ErgodicClasses ergodic_classes(const ChainWindow& chain, Index horizon, double tol,
                               double threshold = kDefaultFlowThreshold);

/// A time-indexed family of subsets J(t) of a base set, t in [t0, t0 + size).
struct Jet {
  std::uint32_t base = 0;
  Index t0 = 0;
  std::vector<std::uint32_t> sets;

  static Jet constant(std::uint32_t base, std::uint32_t set, Index t0, Index count);

  std::uint32_t at(Index t) const;
  bool proper() const;
  /// Pointwise complement within the base set.
  Jet complement() const;
};

/// U_A truncated to [t0, horizon): step t adds a_ij(t) for i in Ju(t+1),
/// j in Jv(t), and for i in Jv(t+1), j in Ju(t). Jets must be defined on
/// [t0, horizon] and disjoint at every time.
double jet_interaction(const ChainWindow& chain, const Jet& ju, const Jet& jv,
                       Index horizon);

}  // namespace chainlab
