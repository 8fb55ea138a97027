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

#include "chainlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include "chainlab/error.hpp"
#include "chainlab/parallel.hpp"
#include "chainlab/prng.hpp"

namespace chainlab {

namespace {

// A trial whose V fell below this fraction of its starting value carries no
// usable ratio information.
constexpr double kCollapsedV = 1e-24;

// Ratios are compared to the bound with this absolute slack for rounding.
constexpr double kRatioTol = 1e-12;

Vector random_state(CounterRng& rng, int n) {
  Vector x(static_cast<std::size_t>(n));
  for (auto& v : x) v = 2.0 * rng.uniform() - 1.0;
  return x;
}

}  // namespace

void Trajectory::write_tsv(std::ostream& os, const ApsTrace* aps) const {
  const std::size_t n = states.empty() ? 0 : states.front().size();
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << "\tx_" << (i + 1);
  if (aps) os << "\tV";
  os << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const Index t = t0 + static_cast<Index>(k);
    os << t;
    for (double v : states[k]) os << '\t' << v;
    if (aps) {
      const bool in = t >= aps->t0 && t <= aps->terminal_time;
      os << '\t';
      if (in) {
        os << quadratic_comparison(aps->at(t), states[k]);
      } else {
        os << "nan";
      }
    }
    os << '\n';
  }
}

Trajectory simulate(const ChainWindow& chain, Index t0, const Vector& x0, Index T) {
  require(static_cast<int>(x0.size()) == chain.dim(), ErrorKind::kDimensionMismatch,
          "initial state length does not match chain dimension");
  require(t0 >= chain.t0() && t0 <= T, ErrorKind::kIndexOutOfRange,
          "simulation needs chain start <= t0 <= T");
  require(chain.reaches(T), ErrorKind::kIndexOutOfRange, "T unreachable for this chain");
  const int n = chain.dim();
  Trajectory traj;
  traj.t0 = t0;
  traj.states.reserve(static_cast<std::size_t>(T - t0 + 1));
  traj.states.push_back(x0);
  for (Index t = t0; t < T; ++t) {
    const Matrix a = chain.at(t);
    const Vector& x = traj.states.back();
    Vector next = right_multiply(a, x);
    if (classify(a) == StochasticClass::kStochastic) {
      const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
      const auto [nlo, nhi] = std::minmax_element(next.begin(), next.end());
      const double scale = std::max(std::abs(*lo), std::abs(*hi));
      const double tol = (kTolStoch + 1e-15 * n) * scale + 1e-300;
      require(*nhi <= *hi + tol && *nlo >= *lo - tol, ErrorKind::kInternal,
              "envelope grew at t = " + std::to_string(t));
    }
    traj.states.push_back(std::move(next));
  }
  return traj;
}

MutualErgodicity mutual_ergodicity(const ChainWindow& chain, int i, int j, int trials,
                                   Index T, double tol, std::uint64_t seed) {
  const int n = chain.dim();
  require(i >= 0 && i < n && j >= 0 && j < n, ErrorKind::kIndexOutOfRange,
          "agent index out of range");
  require(i != j, ErrorKind::kInvalidInput, "mutual ergodicity needs distinct agents");
  require(trials >= 1, ErrorKind::kInvalidInput, "need at least one trial");
  require(T >= chain.t0(), ErrorKind::kIndexOutOfRange, "T precedes chain start");
  const Index latest = chain.t0() + (T - chain.t0()) / 2;

  struct Trial {
    Index t0;
    Vector x0;
    double gap;
  };
  std::vector<Trial> results(static_cast<std::size_t>(trials));
  parallel_for(results.size(), [&](std::size_t k) {
    Trial tr;
    if (k == 0) {
      tr.t0 = chain.t0();
      tr.x0 = basis_vector(n, i);
    } else {
      CounterRng rng(seed, k);
      tr.t0 = chain.t0() + static_cast<Index>(
                               rng.below(static_cast<std::uint64_t>(latest - chain.t0() + 1)));
      tr.x0 = random_state(rng, n);
    }
    const Vector xt = simulate(chain, tr.t0, tr.x0, T).states.back();
    tr.gap = std::abs(xt[static_cast<std::size_t>(i)] - xt[static_cast<std::size_t>(j)]);
    results[k] = std::move(tr);
  });

  // The witness is the first failing trial in seed order, or trial 0.
  MutualErgodicity out;
  out.witness_t0 = results.front().t0;
  out.witness_x0 = results.front().x0;
  bool found = false;
  for (const auto& tr : results) {
    out.worst_gap = std::max(out.worst_gap, tr.gap);
    if (!found && tr.gap > tol) {
      found = true;
      out.witness_t0 = tr.t0;
      out.witness_x0 = tr.x0;
    }
  }
  out.holds = !found;
  return out;
}

double quadratic_comparison(const Vector& u, const Vector& x) {
  require(u.size() == x.size(), ErrorKind::kDimensionMismatch,
          "weight and state lengths differ");
  require(is_stochastic_vector(u), ErrorKind::kNotStochastic,
          "weight vector is not stochastic");
  double mean = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) mean += u[i] * x[i];
  double v = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) v += u[i] * (x[i] - mean) * (x[i] - mean);
  return v;
}

std::string_view to_string(FlowMode m) {
  return m == FlowMode::kCrossFlow ? "cross-flow" : "literal";
}

FlowMode parse_flow_mode(std::string_view s) {
  if (s == "cross-flow") return FlowMode::kCrossFlow;
  if (s == "literal") return FlowMode::kLiteral;
  fail(ErrorKind::kParse, "unknown flow mode '" + std::string(s) + "'");
}

EpochSchedule epoch_times(const ChainWindow& chain, double delta, Index horizon,
                          FlowMode mode) {
  require(delta > 0.0 && std::isfinite(delta), ErrorKind::kDomain, "delta must be positive");
  require(horizon >= chain.t0(), ErrorKind::kIndexOutOfRange, "horizon precedes chain start");
  require(chain.reaches(horizon), ErrorKind::kIndexOutOfRange,
          "horizon unreachable for this chain");
  const int n = chain.dim();
  EpochSchedule out;
  out.t0 = chain.t0();
  out.mode = mode;
  if (n < 2) {
    out.diagnostic = "no cuts exist for n < 2";
    return out;
  }
  const CutFamily family = cut_family(n);
  out.exhaustive = family.exhaustive;
  std::vector<double> acc(family.masks.size(), 0.0);
  for (Index t = chain.t0(); t < horizon; ++t) {
    const Matrix a = chain.at(t);
    double least = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < family.masks.size(); ++c) {
      const std::uint32_t mask = family.masks[c];
      double q = 0.0;
      if (mode == FlowMode::kCrossFlow) {
        q = cut_flow_mask(a, mask).into_subset;
      } else {
        for (int i = 0; i < n; ++i) {
          if (!((mask >> i) & 1u)) continue;
          for (int j = 0; j < n; ++j)
            if ((mask >> j) & 1u) q += a(i, j);
        }
      }
      acc[c] += q;
      least = std::min(least, acc[c]);
    }
    if (least >= delta) {
      out.times.push_back(t + 1);
      std::fill(acc.begin(), acc.end(), 0.0);
    }
  }
  if (out.times.empty()) {
    out.diagnostic = "no epoch completed before horizon " + std::to_string(horizon);
  }
  return out;
}

ContractionResult contraction_check(const ChainWindow& chain, const ApsTrace& aps,
                                    const std::vector<Index>& epochs, double gamma,
                                    double p_star, double delta, double eps, int trials,
                                    std::uint64_t seed) {
  const int n = chain.dim();
  require(n >= 2, ErrorKind::kDomain, "contraction bound needs n >= 2");
  require(gamma >= 0.0 && gamma <= 1.0, ErrorKind::kDomain, "gamma must lie in [0, 1]");
  require(p_star >= 0.0 && p_star <= 1.0, ErrorKind::kDomain, "p* must lie in [0, 1]");
  require(delta > 0.0 && delta < 1.0, ErrorKind::kDomain, "delta must lie in (0, 1)");
  require(eps > 0.0 && eps <= 1.0, ErrorKind::kDomain, "eps must lie in (0, 1]");
  require(trials >= 1, ErrorKind::kInvalidInput, "need at least one trial");
  require(static_cast<int>(aps.terminal.size()) == n, ErrorKind::kDimensionMismatch,
          "absolute probability trace does not match chain dimension");
  require(aps.t0 >= chain.t0(), ErrorKind::kIndexOutOfRange,
          "absolute probability trace starts before the chain");
  Index prev = aps.t0;
  for (Index t : epochs) {
    require(t > prev, ErrorKind::kInvalidInput, "epochs must be strictly increasing after t0");
    prev = t;
  }
  require(epochs.empty() || epochs.back() <= aps.terminal_time, ErrorKind::kIndexOutOfRange,
          "epochs extend past the absolute probability trace");

  ContractionResult out;
  const double dn = static_cast<double>(n - 1);
  out.bound = 1.0 - eps * delta * (1.0 - delta) * (1.0 - delta) * gamma * p_star / (dn * dn);
  if (epochs.empty()) {
    out.diagnostic = "no epochs supplied; bound holds vacuously";
    return out;
  }

  // values[k][q] = V at epoch q (q = 0 is aps.t0) for trial k.
  std::vector<std::vector<double>> values(static_cast<std::size_t>(trials));
  parallel_for(values.size(), [&](std::size_t k) {
    CounterRng rng(seed, k);
    const Trajectory traj = simulate(chain, aps.t0, random_state(rng, n), epochs.back());
    auto& v = values[k];
    v.push_back(quadratic_comparison(aps.at(aps.t0), traj.at(aps.t0)));
    for (Index t : epochs) v.push_back(quadratic_comparison(aps.at(t), traj.at(t)));
  });

  double worst = -1.0;
  int skipped = 0;
  for (std::size_t q = 1; q <= epochs.size(); ++q) {
    double ratio = -1.0;
    for (const auto& v : values) {
      if (v[q - 1] <= kCollapsedV * v[0]) continue;
      ratio = std::max(ratio, v[q] / v[q - 1]);
    }
    if (ratio < 0.0) {
      ++skipped;
      out.per_epoch_ratio.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    out.per_epoch_ratio.push_back(ratio);
    worst = std::max(worst, ratio);
  }
  if (worst < 0.0) {
    out.diagnostic = "V collapsed before the first epoch; bound holds vacuously";
    return out;
  }
  out.slack = out.bound - worst;
  out.holds = worst <= out.bound + kRatioTol;
  if (skipped > 0) {
    out.diagnostic = std::to_string(skipped) + " epochs skipped after V collapsed";
  }
  return out;
}

}  // namespace chainlab
