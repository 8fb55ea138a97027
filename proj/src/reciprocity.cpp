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

#include "chainlab/reciprocity.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "chainlab/error.hpp"
#include "chainlab/parallel.hpp"

namespace chainlab {

double cut_balance_alpha(const ChainWindow& chain) {
  for (const auto& m : chain.stored()) require_stochastic(m);
  const int n = chain.dim();
  if (n < 2) return 1.0;
  const auto family = cut_family(n);
  double alpha = 1.0;
  for (const auto& m : chain.stored()) {
    for (std::uint32_t mask : family.masks) {
      const CutFlow f = cut_flow_mask(m, mask);
      if (f.into_subset > 0.0) {
        alpha = std::min(alpha, f.into_complement / f.into_subset);
      }
      // into_subset == 0 leaves the inequality vacuous (0/0 counts as 1).
    }
  }
  return std::clamp(alpha, 0.0, 1.0);
}

std::string ReciprocityCertificate::serialize() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "p0 " << p0 << '\n'
     << "beta_required " << beta_required << '\n'
     << "witness_mask " << witness_mask << '\n'
     << "witness_window " << witness_start << ' ' << witness_end << '\n'
     << "t0 " << t0 << '\n'
     << "horizon " << horizon << '\n'
     << "exhaustive " << (exhaustive ? "true" : "false") << '\n';
  return os.str();
}

WindowMax max_window_excess(double p0, std::span<const double> forward,
                            std::span<const double> backward) {
  require(forward.size() == backward.size(), ErrorKind::kDimensionMismatch,
          "flow series lengths differ");
  WindowMax best{-std::numeric_limits<double>::infinity(), 0, 0};
  double current = 0.0;
  std::size_t current_start = 0;
  for (std::size_t t = 0; t < forward.size(); ++t) {
    const double excess = p0 * forward[t] - backward[t];
    if (t == 0 || current < 0.0) {
      current = excess;
      current_start = t;
    } else {
      current = current + excess;
    }
    if (current > best.value) best = {current, current_start, t + 1};
  }
  if (forward.empty()) best.value = 0.0;
  return best;
}

ReciprocityCertificate certify_from_series(double p0, Index t0, Index horizon,
                                           const std::vector<CutSeries>& series,
                                           bool exhaustive) {
  ReciprocityCertificate cert;
  cert.p0 = p0;
  cert.t0 = t0;
  cert.horizon = horizon;
  cert.exhaustive = exhaustive;
  cert.witness_start = t0;
  cert.witness_end = t0;

  std::vector<WindowMax> per_cut(series.size());
  parallel_for(series.size(), [&](std::size_t k) {
    per_cut[k] = max_window_excess(p0, series[k].forward, series[k].backward);
  });

  double best = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (per_cut[k].value > best) {
      best = per_cut[k].value;
      cert.witness_mask = series[k].mask;
      cert.witness_start = t0 + static_cast<Index>(per_cut[k].start);
      cert.witness_end = t0 + static_cast<Index>(per_cut[k].end);
    }
  }
  cert.beta_required = best;
  return cert;
}

ReciprocityCertificate approximate_reciprocity_beta(const ChainWindow& chain,
                                                    double p0, Index horizon) {
  require(p0 > 0.0 && p0 <= 1.0, ErrorKind::kDomain, "p0 must lie in (0, 1]");
  require(horizon >= chain.t0(), ErrorKind::kIndexOutOfRange,
          "horizon precedes chain start");
  require(chain.reaches(horizon), ErrorKind::kIndexOutOfRange,
          "horizon " + std::to_string(horizon) + " is unreachable: window ends at " +
              std::to_string(chain.end()) + " with no extension rule");
  const auto matrices = chain.materialize(chain.t0(), horizon);
  for (const auto& m : matrices) require_substochastic(m);

  const int n = chain.dim();
  if (n < 2) {
    ReciprocityCertificate cert;
    cert.p0 = p0;
    cert.t0 = cert.witness_start = cert.witness_end = chain.t0();
    cert.horizon = horizon;
    return cert;
  }
  const auto family = cut_family(n);
  std::vector<CutSeries> series(family.masks.size());
  parallel_for(family.masks.size(), [&](std::size_t k) {
    CutSeries& s = series[k];
    s.mask = family.masks[k];
    s.forward.resize(matrices.size());
    s.backward.resize(matrices.size());
    for (std::size_t t = 0; t < matrices.size(); ++t) {
      const CutFlow f = cut_flow_mask(matrices[t], s.mask);
      s.forward[t] = f.into_complement;
      s.backward[t] = f.into_subset;
    }
  });
  return certify_from_series(p0, chain.t0(), horizon, series, family.exhaustive);
}

bool beta_growth_is_bounded(double beta_half, double beta_full) {
  return beta_full - beta_half <= 0.25 * beta_full + 1e-9;
}

ReciprocityTrend reciprocity_trend(const ChainWindow& chain, double p0, Index horizon) {
  require(horizon >= chain.t0() + 2, ErrorKind::kDomain,
          "trend needs at least two steps");
  ReciprocityTrend trend;
  const Index mid = chain.t0() + (horizon - chain.t0()) / 2;
  trend.half = approximate_reciprocity_beta(chain, p0, mid);
  trend.full = approximate_reciprocity_beta(chain, p0, horizon);
  trend.bounded = beta_growth_is_bounded(trend.half.beta_required,
                                         trend.full.beta_required);
  return trend;
}

bool strongly_connected(const Matrix& m) {
  const int n = m.dim();
  auto reach_all = [&](bool reversed) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        const double w = reversed ? m(j, i) : m(i, j);
        if (w > 0.0 && !seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = 1;
          ++count;
          stack.push_back(j);
        }
      }
    }
    return count == n;
  };
  return reach_all(false) && reach_all(true);
}

StaticEquivalence static_equivalence_check(const Matrix& m) {
  require_stochastic(m);
  const int n = m.dim();
  StaticEquivalence out;
  out.irreducible = strongly_connected(m);
  out.reciprocal = cut_balance_alpha(ChainWindow(0, {m})) > 0.0;

  // A static chain's flow sums diverge exactly on pairs with a_ij + a_ji > 0.
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      x = parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    }
    return x;
  };
  int components = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (m(i, j) + m(j, i) > 0.0) {
        const int a = find(i), b = find(j);
        if (a != b) {
          parent[static_cast<std::size_t>(a)] = b;
          --components;
        }
      }
    }
  }
  out.flow_connected = components == 1;

  if (out.irreducible != (out.reciprocal && out.flow_connected)) {
    fail(ErrorKind::kInternal,
         "irreducibility disagrees with reciprocity and flow connectivity");
  }
  return out;
}

}  // namespace chainlab
