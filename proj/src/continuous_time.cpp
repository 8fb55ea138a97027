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

#include "chainlab/continuous_time.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "chainlab/error.hpp"

namespace chainlab {

namespace {

// Composition identity tolerance for sampled chains.
constexpr double kCompositionTol = 1e-9;

double norm1(const Matrix& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

// Solves a X = b with partial pivoting.
Matrix lu_solve(Matrix a, Matrix b) {
  const int n = a.dim();
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    require(a(piv, k) != 0.0, ErrorKind::kInternal, "singular Pade denominator");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      for (int j = 0; j < b.cols(); ++j) std::swap(b(k, j), b(piv, j));
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (int j = 0; j < b.cols(); ++j) b(i, j) -= f * b(k, j);
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    for (int j = 0; j < b.cols(); ++j) {
      double s = b(k, j);
      for (int i = k + 1; i < n; ++i) s -= a(k, i) * b(i, j);
      b(k, j) = s / a(k, k);
    }
  }
  return b;
}

double max_row_sum_error(const Matrix& m) {
  double e = 0.0;
  for (int i = 0; i < m.rows(); ++i) e = std::max(e, std::abs(m.row_sum(i) - 1.0));
  return e;
}

}  // namespace

void validate_generator(const Matrix& g, double tol) {
  require(g.square() && g.dim() >= 1 && g.dim() <= kMaxDim, ErrorKind::kDimensionMismatch,
          "generator must be square with 1 <= n <= " + std::to_string(kMaxDim));
  for (int i = 0; i < g.dim(); ++i) {
    double scale = 1.0;
    for (int j = 0; j < g.dim(); ++j) {
      require(std::isfinite(g(i, j)), ErrorKind::kInvalidInput, "generator entry not finite");
      if (i != j) {
        require(g(i, j) >= 0.0, ErrorKind::kInvalidInput,
                "generator off-diagonal (" + std::to_string(i + 1) + ", " +
                    std::to_string(j + 1) + ") is negative");
      }
      scale = std::max(scale, std::abs(g(i, j)));
    }
    require(std::abs(g.row_sum(i)) <= tol * scale, ErrorKind::kInvalidInput,
            "generator row " + std::to_string(i + 1) + " does not sum to zero");
  }
}

CtChain::CtChain(std::vector<CtSegment> segments, std::vector<double> grid)
    : segments_(std::move(segments)), grid_(std::move(grid)) {
  require(!segments_.empty(), ErrorKind::kInvalidInput, "continuous-time chain has no segments");
  dim_ = segments_.front().generator.dim();
  breakpoints_.push_back(0.0);
  for (const auto& s : segments_) {
    require(s.generator.dim() == dim_ && s.generator.square(), ErrorKind::kDimensionMismatch,
            "segment generators differ in dimension");
    require(s.duration > 0.0 && std::isfinite(s.duration), ErrorKind::kInvalidInput,
            "segment duration must be positive and finite");
    validate_generator(s.generator);
    breakpoints_.push_back(breakpoints_.back() + s.duration);
  }
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    require(std::isfinite(grid_[k]) && grid_[k] >= 0.0 && grid_[k] <= end(),
            ErrorKind::kIndexOutOfRange, "grid time outside the segment range");
    require(k == 0 || grid_[k] > grid_[k - 1], ErrorKind::kInvalidInput,
            "grid must be strictly increasing");
  }
}

CtChain CtChain::with_grid(std::vector<double> grid) const {
  return CtChain(segments_, std::move(grid));
}

Matrix CtChain::integral(double a, double b) const {
  require(a >= 0.0 && a <= b && b <= end(), ErrorKind::kIndexOutOfRange,
          "integration interval not covered by segments");
  Matrix out(dim_);
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const double lo = std::max(a, breakpoints_[s]);
    const double hi = std::min(b, breakpoints_[s + 1]);
    if (hi > lo) out = out + (hi - lo) * segments_[s].generator;
  }
  return out;
}

Matrix expm(const Matrix& m) {
  require(m.square(), ErrorKind::kDimensionMismatch, "expm needs a square matrix");
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const int n = m.dim();
  const double norm = norm1(m);
  int squarings = 0;
  if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  const Matrix a = std::ldexp(1.0, -squarings) * m;
  const Matrix id = Matrix::identity(n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
                        b[5] * a4 + b[3] * a2 + b[1] * id);
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                   b[2] * a2 + b[0] * id;
  Matrix r = lu_solve(v - u, v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

TransitionOperator transition(const CtChain& chain, double tau, double t) {
  require(tau >= 0.0 && tau <= t, ErrorKind::kDomain, "transition needs 0 <= tau <= t");
  require(t <= chain.end(), ErrorKind::kIndexOutOfRange,
          "segments do not cover [tau, t]");
  const int n = chain.dim();
  TransitionOperator op;
  op.tau = tau;
  op.t = t;
  op.matrix = Matrix::identity(n);
  const auto& bp = chain.breakpoints();
  for (std::size_t s = 0; s < chain.segments().size(); ++s) {
    const double lo = std::max(tau, bp[s]);
    const double hi = std::min(t, bp[s + 1]);
    if (!(hi > lo)) continue;
    const Matrix step = expm((hi - lo) * chain.segments()[s].generator);
    op.max_local_error = std::max(op.max_local_error, max_row_sum_error(step));
    op.matrix = step * op.matrix;
    ++op.step_count;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double& x = op.matrix(i, j);
      if (x >= 0.0) continue;
      require(x >= -kClampCt, ErrorKind::kInternal,
              "transition matrix entry below clamp tolerance");
      x = 0.0;
      ++op.clamped;
    }
  }
  require(max_row_sum_error(op.matrix) <= kTolCt, ErrorKind::kInternal,
          "transition matrix lost row-stochasticity");
  return op;
}

ChainWindow sample_discrete(const CtChain& chain) {
  const auto& grid = chain.grid();
  require(grid.size() >= 2, ErrorKind::kInvalidInput, "sampling needs at least two grid times");
  std::vector<Matrix> samples;
  samples.reserve(grid.size() - 1);
  Matrix product = Matrix::identity(chain.dim());
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    samples.push_back(transition(chain, grid[k], grid[k + 1]).matrix);
    product = samples.back() * product;
  }
  const Matrix whole = transition(chain, grid.front(), grid.back()).matrix;
  require(max_abs_diff(product, whole) <= kCompositionTol, ErrorKind::kInternal,
          "sampled products disagree with the transition matrix");
  return ChainWindow(0, std::move(samples));
}

double uniform_bound_M(const CtChain& chain) {
  const auto& grid = chain.grid();
  require(grid.size() >= 2, ErrorKind::kInvalidInput, "bound needs at least two grid times");
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const Matrix w = chain.integral(grid[k], grid[k + 1]);
    for (int i = 0; i < w.rows(); ++i)
      for (int j = 0; j < w.cols(); ++j)
        if (i != j) m = std::max(m, w(i, j));
  }
  return m;
}

ReciprocityCertificate ct_reciprocity_beta(const CtChain& chain, double p0) {
  require(p0 > 0.0 && p0 <= 1.0, ErrorKind::kDomain, "p0 must lie in (0, 1]");
  const auto& grid = chain.grid();
  require(grid.size() >= 2, ErrorKind::kInvalidInput, "scan needs at least two grid times");
  const int n = chain.dim();
  const auto steps = static_cast<Index>(grid.size() - 1);
  if (n < 2) {
    ReciprocityCertificate c;
    c.p0 = p0;
    c.horizon = steps;
    return c;
  }
  std::vector<Matrix> integrals;
  integrals.reserve(grid.size() - 1);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    integrals.push_back(chain.integral(grid[k], grid[k + 1]));
  const CutFamily family = cut_family(n);
  std::vector<CutSeries> series;
  series.reserve(family.masks.size());
  for (std::uint32_t mask : family.masks) {
    CutSeries s{mask, {}, {}};
    for (const auto& w : integrals) {
      const CutFlow f = cut_flow_mask(w, mask);
      s.forward.push_back(f.into_complement);
      s.backward.push_back(f.into_subset);
    }
    series.push_back(std::move(s));
  }
  return certify_from_series(p0, 0, steps, series, family.exhaustive);
}

SandwichResult sandwich_check(const CtChain& chain, const SubsetCut& cut) {
  const auto& grid = chain.grid();
  require(grid.size() >= 2, ErrorKind::kInvalidInput, "check needs at least two grid times");
  require(cut.n() == chain.dim(), ErrorKind::kDimensionMismatch,
          "cut dimension does not match chain");
  const double n = chain.dim();
  SandwichResult out;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const Matrix phi = transition(chain, grid[k], grid[k + 1]).matrix;
    const double pf = cut_flow_mask(phi, cut.mask()).into_complement;
    const double in = cut_flow_mask(chain.integral(grid[k], grid[k + 1]), cut.mask())
                          .into_complement;
    out.phi_flow.push_back(pf);
    out.integral_flow.push_back(in);
    if (pf > n * in + kTolCt) out.upper_ok = false;
    if (in > 0.0) {
      const double ratio = pf / in;
      out.g_empirical = out.g_empirical ? std::min(*out.g_empirical, ratio) : ratio;
    }
  }
  return out;
}

FlowGraph ct_flow_graph(const CtChain& chain, double threshold) {
  const auto& grid = chain.grid();
  require(grid.size() >= 2, ErrorKind::kInvalidInput, "flow graph needs at least two grid times");
  const auto steps = static_cast<Index>(grid.size() - 1);
  const std::size_t mid = static_cast<std::size_t>(steps / 2);
  const Matrix total = chain.integral(grid.front(), grid.back());
  const Matrix late = chain.integral(grid[mid], grid.back());
  const int n = chain.dim();
  Matrix weight(n);
  Matrix slope(n);
  const auto late_steps = static_cast<double>(steps - static_cast<Index>(mid));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      weight(i, j) = total(i, j) + total(j, i);
      slope(i, j) = (late(i, j) + late(j, i)) / late_steps;
    }
  }
  return flow_graph_from_weights(std::move(weight), std::move(slope), 0, steps, threshold);
}

}  // namespace chainlab
