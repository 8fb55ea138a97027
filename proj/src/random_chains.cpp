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

#include "chainlab/random_chains.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

#include "chainlab/error.hpp"
#include "chainlab/parallel.hpp"
#include "chainlab/prng.hpp"

namespace chainlab {

namespace {

// Off-diagonal expectations below this are ignored by the feedback estimate.
constexpr double kFeedbackFloor = 1e-12;

struct FamilyInfo {
  Family family;
  std::string_view name;
  std::size_t params;
};

constexpr FamilyInfo kFamilies[] = {
    {Family::kLazyRandomWalk, "lazy-random-walk", 2},
    {Family::kGossipPairs, "gossip-pairs", 2},
    {Family::kOneDirectionalElite, "one-directional-elite", 2},
    {Family::kBlockDiagonalMixers, "block-diagonal-mixers", 3},
    {Family::kStaticPerturbed, "static-perturbed", 2},
    {Family::kIdentity, "identity", 0},
};

const FamilyInfo& info(Family f) {
  for (const auto& fi : kFamilies)
    if (fi.family == f) return fi;
  fail(ErrorKind::kInternal, "unknown family");
}

void require_unit(double x, const char* name) {
  require(x >= 0.0 && x <= 1.0, ErrorKind::kInvalidInput,
          std::string("parameter ") + name + " must lie in [0, 1]");
}

// [begin, end) of block k when n agents are split into b contiguous blocks.
std::pair<int, int> block_range(int n, int b, int k) { return {k * n / b, (k + 1) * n / b}; }

void lazy_walk_rows(Matrix& a, int begin, int end, double s, double q, CounterRng& rng) {
  std::vector<int> picked;
  for (int i = begin; i < end; ++i) {
    picked.clear();
    for (int j = begin; j < end; ++j)
      if (j != i && rng.uniform() < q) picked.push_back(j);
    if (picked.empty()) {
      a(i, i) = 1.0;
      continue;
    }
    a(i, i) = s;
    const double share = (1.0 - s) / static_cast<double>(picked.size());
    for (int j : picked) a(i, j) += share;
  }
}

void lazy_walk_mean(Matrix& a, int begin, int end, double s, double q) {
  const int m = end - begin;
  if (m == 1) {
    a(begin, begin) = 1.0;
    return;
  }
  const double off = (1.0 - s) * (1.0 - std::pow(1.0 - q, m - 1)) / (m - 1);
  for (int i = begin; i < end; ++i)
    for (int j = begin; j < end; ++j) a(i, j) = i == j ? 1.0 - (m - 1) * off : off;
}

Matrix lazy_cycle(int n, double s) {
  Matrix c(n);
  if (n == 1) {
    c(0, 0) = 1.0;
    return c;
  }
  for (int i = 0; i < n; ++i) {
    c(i, i) = s;
    c(i, (i + 1) % n) += 1.0 - s;
  }
  return c;
}

class GeneratedSource final : public MatrixSource {
 public:
  explicit GeneratedSource(GeneratorSpec spec) : spec_(std::move(spec)) {}
  int dim() const override { return spec_.n; }
  Matrix at(Index t) const override { return sample(spec_, t); }
  std::vector<std::pair<std::string, std::string>> header() const override {
    return {{"family", std::string(to_string(spec_.family))},
            {"params", format_params(spec_.params)},
            {"seed", std::to_string(spec_.seed)}};
  }

 private:
  GeneratorSpec spec_;
};

}  // namespace

std::string_view to_string(Family f) { return info(f).name; }

Family parse_family(std::string_view s) {
  for (const auto& fi : kFamilies)
    if (fi.name == s) return fi.family;
  fail(ErrorKind::kParse, "unknown family '" + std::string(s) + "'");
}

std::vector<Family> all_families() {
  std::vector<Family> out;
  for (const auto& fi : kFamilies) out.push_back(fi.family);
  return out;
}

std::vector<double> parse_params(std::string_view text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = text.find(',', pos);
    const std::string item(text.substr(pos, comma == std::string_view::npos ? text.npos
                                                                            : comma - pos));
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    require(!item.empty() && end == item.c_str() + item.size() && std::isfinite(v),
            ErrorKind::kParse, "malformed parameter '" + item + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string format_params(const std::vector<double>& params) {
  std::string out;
  char buf[32];
  for (std::size_t k = 0; k < params.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", params[k]);
    if (k) out += ',';
    out += buf;
  }
  return out;
}

void validate(const GeneratorSpec& spec) {
  require(spec.n >= 1 && spec.n <= kMaxDim, ErrorKind::kInvalidInput,
          "generator needs 1 <= n <= " + std::to_string(kMaxDim));
  const auto& fi = info(spec.family);
  require(spec.params.size() == fi.params, ErrorKind::kInvalidInput,
          std::string(fi.name) + " takes " + std::to_string(fi.params) + " parameters");
  const auto& p = spec.params;
  switch (spec.family) {
    case Family::kLazyRandomWalk:
      require_unit(p[0], "s");
      require_unit(p[1], "q");
      break;
    case Family::kGossipPairs:
      require_unit(p[0], "p");
      require_unit(p[1], "w");
      require(spec.n >= 2, ErrorKind::kInvalidInput, "gossip-pairs needs n >= 2");
      break;
    case Family::kOneDirectionalElite:
      require_unit(p[0], "w");
      require_unit(p[1], "r");
      break;
    case Family::kBlockDiagonalMixers:
      require(p[0] >= 1.0 && p[0] <= spec.n && p[0] == std::floor(p[0]),
              ErrorKind::kInvalidInput, "block count must be an integer in [1, n]");
      require_unit(p[1], "s");
      require_unit(p[2], "q");
      break;
    case Family::kStaticPerturbed:
      require_unit(p[0], "s");
      require_unit(p[1], "eps");
      break;
    case Family::kIdentity:
      break;
  }
}

Matrix sample(const GeneratorSpec& spec, Index t, std::uint64_t replicate) {
  const int n = spec.n;
  const auto& p = spec.params;
  CounterRng rng(spec.seed, static_cast<std::uint64_t>(t), replicate);
  Matrix a(n);
  switch (spec.family) {
    case Family::kLazyRandomWalk:
      lazy_walk_rows(a, 0, n, p[0], p[1], rng);
      break;
    case Family::kGossipPairs: {
      a = Matrix::identity(n);
      if (rng.uniform() < p[0]) {
        const auto pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        auto k = static_cast<int>(rng.below(pairs));
        int i = 0;
        while (k >= n - 1 - i) {
          k -= n - 1 - i;
          ++i;
        }
        const int j = i + 1 + k;
        a(i, i) = a(j, j) = 1.0 - p[1];
        a(i, j) = a(j, i) = p[1];
      }
      break;
    }
    case Family::kOneDirectionalElite:
      a(0, 0) = 1.0;
      for (int i = 1; i < n; ++i) {
        if (rng.uniform() < p[1]) {
          a(i, 0) = p[0];
          a(i, i) = 1.0 - p[0];
        } else {
          a(i, i) = 1.0;
        }
      }
      break;
    case Family::kBlockDiagonalMixers: {
      const int b = static_cast<int>(p[0]);
      for (int k = 0; k < b; ++k) {
        const auto [lo, hi] = block_range(n, b, k);
        lazy_walk_rows(a, lo, hi, p[1], p[2], rng);
      }
      break;
    }
    case Family::kStaticPerturbed: {
      a = (1.0 - p[1]) * lazy_cycle(n, p[0]);
      for (int i = 0; i < n; ++i)
        a(i, static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))) += p[1];
      break;
    }
    case Family::kIdentity:
      a = Matrix::identity(n);
      break;
  }
  return a;
}

Matrix expected_matrix(const GeneratorSpec& spec) {
  validate(spec);
  const int n = spec.n;
  const auto& p = spec.params;
  Matrix e(n);
  switch (spec.family) {
    case Family::kLazyRandomWalk:
      lazy_walk_mean(e, 0, n, p[0], p[1]);
      break;
    case Family::kGossipPairs: {
      const double off = p[0] * p[1] / (n * (n - 1) / 2.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) e(i, j) = i == j ? 1.0 - 2.0 * p[0] * p[1] / n : off;
      break;
    }
    case Family::kOneDirectionalElite:
      e(0, 0) = 1.0;
      for (int i = 1; i < n; ++i) {
        e(i, 0) = p[1] * p[0];
        e(i, i) = 1.0 - p[1] * p[0];
      }
      break;
    case Family::kBlockDiagonalMixers: {
      const int b = static_cast<int>(p[0]);
      for (int k = 0; k < b; ++k) {
        const auto [lo, hi] = block_range(n, b, k);
        lazy_walk_mean(e, lo, hi, p[1], p[2]);
      }
      break;
    }
    case Family::kStaticPerturbed:
      e = (1.0 - p[1]) * lazy_cycle(n, p[0]) + Matrix(n, p[1] / n);
      break;
    case Family::kIdentity:
      e = Matrix::identity(n);
      break;
  }
  return e;
}

ChainWindow generate(const GeneratorSpec& spec, Index count, Index t0) {
  validate(spec);
  require(count >= 0, ErrorKind::kInvalidInput, "count must be nonnegative");
  std::vector<Matrix> matrices(static_cast<std::size_t>(count));
  parallel_for(matrices.size(), [&](std::size_t k) {
    matrices[k] = sample(spec, t0 + static_cast<Index>(k));
  });
  return ChainWindow(t0, std::move(matrices), Extension::kGenerator,
                     std::make_shared<GeneratedSource>(spec));
}

ChainWindow expected_chain(const GeneratorSpec& spec, Index count, Index t0) {
  require(count >= 1, ErrorKind::kInvalidInput, "count must be positive");
  return ChainWindow::constant(expected_matrix(spec), count, t0);
}

FeedbackEstimate feedback_coefficient(const GeneratorSpec& spec, int samples, Index t) {
  validate(spec);
  require(samples >= 1000, ErrorKind::kInvalidInput, "feedback estimate needs >= 1000 samples");
  const int n = spec.n;
  const auto cells = static_cast<std::size_t>(n) * n;
  // Per (i, j): sums of X = a_ii a_ij, Y = a_ij, X^2, Y^2, XY.
  std::vector<double> sx(cells), sy(cells), sxx(cells), syy(cells), sxy(cells);
  for (int r = 0; r < samples; ++r) {
    const Matrix a = sample(spec, t, static_cast<std::uint64_t>(r));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const auto c = static_cast<std::size_t>(i) * n + j;
        const double y = a(i, j);
        const double x = a(i, i) * y;
        sx[c] += x;
        sy[c] += y;
        sxx[c] += x * x;
        syy[c] += y * y;
        sxy[c] += x * y;
      }
    }
  }
  FeedbackEstimate out;
  out.vacuous = true;
  const double N = samples;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto c = static_cast<std::size_t>(i) * n + j;
      if (i == j || sy[c] / N <= kFeedbackFloor) continue;
      const double my = sy[c] / N;
      const double ratio = sx[c] / sy[c];
      // Delta-method variance of the ratio of means.
      const double var_e = (sxx[c] - 2.0 * ratio * sxy[c] + ratio * ratio * syy[c]) / N -
                           std::pow(sx[c] / N - ratio * my, 2);
      const double se = std::sqrt(std::max(0.0, var_e) / (N - 1.0)) / my;
      if (out.vacuous || ratio < out.gamma_hat) {
        out.vacuous = false;
        out.gamma_hat = ratio;
        out.std_error = se;
        out.i = i;
        out.j = j;
      }
    }
  }
  if (out.vacuous) out.gamma_hat = 1.0;
  return out;
}

}  // namespace chainlab
