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

#include "chainlab/flow_graph.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>

#include "chainlab/error.hpp"

namespace chainlab {

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
  }

  Partition groups() {
    const int n = static_cast<int>(parent_.size());
    Partition out;
    std::vector<int> slot(parent_.size(), -1);
    for (int i = 0; i < n; ++i) {
      const int r = find(i);
      auto& s = slot[static_cast<std::size_t>(r)];
      if (s < 0) {
        s = static_cast<int>(out.size());
        out.emplace_back();
      }
      out[static_cast<std::size_t>(s)].push_back(i);
    }
    return out;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

void FlowGraph::write_tsv(std::ostream& os) const {
  os << "i\tj\tweight\tverdict\tslope\n";
  os << std::setprecision(17);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      os << (i + 1) << '\t' << (j + 1) << '\t' << weight(i, j) << '\t'
         << (edge(i, j) ? "present" : "absent") << '\t' << slope(i, j) << '\n';
    }
  }
}

FlowGraph flow_graph_from_weights(Matrix weight, Matrix slope, Index t0, Index horizon,
                                  double threshold) {
  require(threshold > 0.0, ErrorKind::kDomain, "flow threshold must be positive");
  require(weight.square() && slope.rows() == weight.rows() && slope.cols() == weight.cols(),
          ErrorKind::kDimensionMismatch, "flow weight shape mismatch");
  FlowGraph g;
  g.n = weight.dim();
  g.t0 = t0;
  g.horizon = horizon;
  g.threshold = threshold;
  g.weight = std::move(weight);
  g.slope = std::move(slope);
  return g;
}

FlowGraph build_flow_graph(const ChainWindow& chain, Index horizon, double threshold) {
  require(threshold > 0.0, ErrorKind::kDomain, "flow threshold must be positive");
  require(horizon >= chain.t0(), ErrorKind::kIndexOutOfRange, "horizon precedes chain start");
  require(chain.reaches(horizon), ErrorKind::kIndexOutOfRange,
          "horizon unreachable for this chain");
  const int n = chain.dim();
  const Index t0 = chain.t0();
  const Index mid = t0 + (horizon - t0) / 2;
  Matrix weight(n);
  Matrix at_mid(n);
  for (Index t = t0; t < horizon; ++t) {
    if (t == mid) at_mid = weight;
    const Matrix a = chain.at(t);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double w = a(i, j) + a(j, i);
        weight(i, j) += w;
        weight(j, i) += w;
      }
    }
  }
  if (mid == horizon) at_mid = weight;
  Matrix slope(n);
  const auto late = static_cast<double>(horizon - mid);
  if (late > 0.0) slope = (1.0 / late) * (weight - at_mid);
  return flow_graph_from_weights(std::move(weight), std::move(slope), t0, horizon,
                                 threshold);
}

Partition connected_components(const FlowGraph& g) {
  UnionFind uf(g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = i + 1; j < g.n; ++j)
      if (g.edge(i, j)) uf.unite(i, j);
  return uf.groups();
}

Partition group_rows(const Matrix& m, double tol) {
  UnionFind uf(m.rows());
  for (int a = 0; a < m.rows(); ++a)
    for (int b = a + 1; b < m.rows(); ++b)
      if (l1_distance(m.row(a), m.row(b)) <= tol) uf.unite(a, b);
  return uf.groups();
}

ErgodicClasses ergodic_classes(const ChainWindow& chain, Index horizon, double tol,
                               double threshold) {
  require(tol >= 0.0, ErrorKind::kDomain, "tolerance must be nonnegative");
  const Index t0 = chain.t0();
  require(horizon > t0, ErrorKind::kDomain, "horizon must exceed chain start");
  require(chain.reaches(horizon), ErrorKind::kIndexOutOfRange,
          "horizon unreachable for this chain");
  for (const auto& m : chain.materialize(t0, horizon)) require_stochastic(m);

  const Index span = horizon - t0;
  std::vector<Index> starts{t0};
  for (Index d : {span / 8, span / 4})
    if (d > 0 && starts.back() != t0 + d) starts.push_back(t0 + d);

  ErgodicClasses out;
  out.grouping_stable = true;
  for (Index s : starts) {
    const Index half = s + (horizon - s) / 2;
    const Matrix early = backward_product(chain, s, half);
    const Matrix late = chain.materialize(half, horizon).empty()
                            ? early
                            : backward_product(chain, half, horizon) * early;
    for (int i = 0; i < late.rows(); ++i)
      out.cauchy_gap = std::max(out.cauchy_gap, l1_distance(early.row(i), late.row(i)));
    Partition p = group_rows(late, tol);
    if (s == t0) {
      out.classes = std::move(p);
    } else if (p != out.classes) {
      out.grouping_stable = false;
    }
  }
  out.class_ergodic = out.grouping_stable && out.cauchy_gap <= tol;
  out.flow_components = connected_components(build_flow_graph(chain, horizon, threshold));
  out.agrees_with_flow_graph = out.flow_components == out.classes;
  return out;
}

Jet Jet::constant(std::uint32_t base, std::uint32_t set, Index t0, Index count) {
  require(count >= 0, ErrorKind::kInvalidInput, "jet length must be nonnegative");
  require((set & ~base) == 0, ErrorKind::kInvalidInput, "jet set outside its base");
  return {base, t0, std::vector<std::uint32_t>(static_cast<std::size_t>(count), set)};
}

std::uint32_t Jet::at(Index t) const {
  require(t >= t0 && t < t0 + static_cast<Index>(sets.size()), ErrorKind::kIndexOutOfRange,
          "jet undefined at t = " + std::to_string(t));
  return sets[static_cast<std::size_t>(t - t0)];
}

bool Jet::proper() const {
  return std::all_of(sets.begin(), sets.end(), [this](std::uint32_t s) {
    return s != 0 && s != base && (s & ~base) == 0;
  });
}

Jet Jet::complement() const {
  Jet out{base, t0, sets};
  for (auto& s : out.sets) s = base & ~s;
  return out;
}

double jet_interaction(const ChainWindow& chain, const Jet& ju, const Jet& jv,
                       Index horizon) {
  const Index t0 = chain.t0();
  require(horizon >= t0, ErrorKind::kIndexOutOfRange, "horizon precedes chain start");
  require(chain.reaches(horizon), ErrorKind::kIndexOutOfRange,
          "horizon unreachable for this chain");
  const int n = chain.dim();
  const std::uint32_t full = SubsetCut::full_mask(n);
  for (Index t = t0; t <= horizon; ++t) {
    const std::uint32_t u = ju.at(t);
    const std::uint32_t v = jv.at(t);
    require(((u | v) & ~full) == 0, ErrorKind::kIndexOutOfRange,
            "jet contains an index beyond the chain dimension");
    require((u & v) == 0, ErrorKind::kInvalidInput,
            "jets intersect at t = " + std::to_string(t));
  }
  const auto pick = [n](const Matrix& a, std::uint32_t rows, std::uint32_t cols) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!((rows >> i) & 1u)) continue;
      for (int j = 0; j < n; ++j)
        if ((cols >> j) & 1u) s += a(i, j);
    }
    return s;
  };
  double total = 0.0;
  for (Index t = t0; t < horizon; ++t) {
    const Matrix a = chain.at(t);
    total += pick(a, ju.at(t + 1), jv.at(t)) + pick(a, jv.at(t + 1), ju.at(t));
  }
  return total;
}

}  // namespace chainlab
