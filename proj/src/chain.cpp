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

#include "chainlab/chain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include "chainlab/error.hpp"
#include "chainlab/prng.hpp"

namespace chainlab {

StochasticClass classify(const Matrix& m, double tol) {
  if (!m.square()) return StochasticClass::kInvalid;
  bool stochastic = true;
  for (int i = 0; i < m.rows(); ++i) {
    for (double v : m.row(i)) {
      if (!(v >= 0.0) || !std::isfinite(v)) return StochasticClass::kInvalid;
    }
    const double s = m.row_sum(i);
    if (s > 1.0 + tol) return StochasticClass::kInvalid;
    if (s < 1.0 - tol) stochastic = false;
  }
  return stochastic ? StochasticClass::kStochastic : StochasticClass::kSubstochastic;
}

std::string_view to_string(StochasticClass c) {
  switch (c) {
    case StochasticClass::kStochastic: return "stochastic";
    case StochasticClass::kSubstochastic: return "substochastic";
    case StochasticClass::kInvalid: return "invalid";
  }
  return "invalid";
}

void require_stochastic(const Matrix& m, double tol) {
  require(classify(m, tol) == StochasticClass::kStochastic,
          ErrorKind::kNotStochastic, "matrix is not row-stochastic");
}

void require_substochastic(const Matrix& m, double tol) {
  require(classify(m, tol) != StochasticClass::kInvalid,
          ErrorKind::kNotStochastic,
          "matrix is not substochastic (negative entry or row sum above 1)");
}

bool is_stochastic_vector(const Vector& v, double tol) {
  double s = 0.0;
  for (double x : v) {
    if (!(x >= 0.0)) return false;
    s += x;
  }
  return std::abs(s - 1.0) <= tol;
}

std::string_view to_string(Extension e) {
  switch (e) {
    case Extension::kNone: return "none";
    case Extension::kIdentity: return "identity";
    case Extension::kRepeat: return "repeat";
    case Extension::kCycle: return "cycle";
    case Extension::kGenerator: return "generator";
  }
  return "none";
}

Extension parse_extension(std::string_view s) {
  if (s == "none") return Extension::kNone;
  if (s == "identity") return Extension::kIdentity;
  if (s == "repeat") return Extension::kRepeat;
  if (s == "cycle") return Extension::kCycle;
  if (s == "generator") return Extension::kGenerator;
  fail(ErrorKind::kParse, "unknown extension rule '" + std::string(s) + "'");
}

ChainWindow::ChainWindow(Index t0, std::vector<Matrix> matrices,
                         Extension extension,
                         std::shared_ptr<const MatrixSource> source)
    : t0_(t0), matrices_(std::move(matrices)), extension_(extension),
      source_(std::move(source)) {
  require(t0 >= 0, ErrorKind::kInvalidInput, "chain start index must be >= 0");
  require(!matrices_.empty() || (extension_ == Extension::kGenerator && source_),
          ErrorKind::kInvalidInput, "chain window must hold at least one matrix");
  require(extension_ != Extension::kGenerator || source_ != nullptr,
          ErrorKind::kInvalidInput, "generator extension requires a source");
  dim_ = matrices_.empty() ? source_->dim() : matrices_.front().dim();
  require(dim_ >= 1 && dim_ <= kMaxDim, ErrorKind::kInvalidInput,
          "chain dimension must lie in [1, 32]");
  for (const auto& m : matrices_) {
    require(m.square() && m.dim() == dim_, ErrorKind::kDimensionMismatch,
            "all matrices in a chain must share dimension " + std::to_string(dim_));
  }
  if (source_) {
    require(source_->dim() == dim_, ErrorKind::kDimensionMismatch,
            "generator dimension does not match stored matrices");
  }
  identity_ = Matrix::identity(dim_);
}

ChainWindow ChainWindow::constant(const Matrix& m, Index count, Index t0) {
  require(count >= 1, ErrorKind::kInvalidInput, "count must be >= 1");
  return ChainWindow(t0, std::vector<Matrix>(static_cast<std::size_t>(count), m),
                     Extension::kRepeat);
}

bool ChainWindow::covers(Index t) const {
  if (t < t0_) return false;
  if (t < end()) return true;
  return extension_ != Extension::kNone;
}

bool ChainWindow::reaches(Index t_end) const {
  return t_end <= end() || extension_ != Extension::kNone;
}

Matrix ChainWindow::at(Index t) const {
  if (t < t0_) {
    fail(ErrorKind::kIndexOutOfRange,
         "time " + std::to_string(t) + " precedes chain start " + std::to_string(t0_));
  }
  if (t < end()) return matrices_[static_cast<std::size_t>(t - t0_)];
  switch (extension_) {
    case Extension::kIdentity: return identity_;
    case Extension::kRepeat: return matrices_.back();
    case Extension::kCycle:
      return matrices_[static_cast<std::size_t>((t - t0_) % length())];
    case Extension::kGenerator: return source_->at(t);
    case Extension::kNone: break;
  }
  fail(ErrorKind::kIndexOutOfRange,
       "time " + std::to_string(t) + " is beyond the chain window end " +
           std::to_string(end()) + " and no extension rule is set");
}

std::vector<Matrix> ChainWindow::materialize(Index first, Index last) const {
  require(first <= last, ErrorKind::kIndexOutOfRange, "empty or reversed range");
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(last - first));
  for (Index t = first; t < last; ++t) out.push_back(at(t));
  return out;
}

SubsetCut::SubsetCut(int n, std::uint32_t members) : n_(n), mask_(members) {
  require(n >= 2 && n <= kMaxDim, ErrorKind::kInvalidInput,
          "cut dimension must lie in [2, 32]");
  require(mask_ != 0 && (mask_ & ~full_mask(n)) == 0 && mask_ != full_mask(n),
          ErrorKind::kInvalidInput, "cut must be a nonempty proper subset");
}

SubsetCut SubsetCut::of(int n, std::initializer_list<int> members) {
  std::uint32_t mask = 0;
  for (int i : members) {
    require(i >= 0 && i < n, ErrorKind::kInvalidInput, "cut member out of range");
    mask |= 1u << i;
  }
  return {n, mask};
}

std::vector<int> SubsetCut::members() const {
  std::vector<int> out;
  for (int i = 0; i < n_; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::vector<int> SubsetCut::complement_members() const {
  std::vector<int> out;
  for (int i = 0; i < n_; ++i)
    if (!contains(i)) out.push_back(i);
  return out;
}

CutFamily cut_family(int n, std::uint64_t seed) {
  CutFamily family;
  if (n < 2) return family;
  const std::uint32_t full = SubsetCut::full_mask(n);
  if (n <= kExhaustiveCutLimit) {
    family.masks.reserve(full - 1);
    for (std::uint32_t m = 1; m < full; ++m) family.masks.push_back(m);
    return family;
  }
  family.exhaustive = false;
  std::set<std::uint32_t> chosen;
  for (int i = 0; i < n; ++i) {
    chosen.insert(1u << i);
    chosen.insert(full & ~(1u << i));
  }
  CounterRng rng(seed, 0xC075);
  while (chosen.size() < static_cast<std::size_t>(2 * n + kSampledCutCount)) {
    const auto m = static_cast<std::uint32_t>(rng.next()) & full;
    if (m != 0 && m != full) chosen.insert(m);
  }
  family.masks.assign(chosen.begin(), chosen.end());
  return family;
}

Matrix backward_product(const ChainWindow& chain, Index t1, Index t2) {
  require(t1 >= chain.t0() && t1 <= t2, ErrorKind::kIndexOutOfRange,
          "backward product needs t0 <= t1 <= t2");
  require(chain.reaches(t2), ErrorKind::kIndexOutOfRange,
          "t2 = " + std::to_string(t2) + " lies beyond the chain window end " +
              std::to_string(chain.end()) + " and no extension rule is set");
  Matrix p = Matrix::identity(chain.dim());
  for (Index t = t1; t < t2; ++t) p = chain.at(t) * p;
  return p;
}

namespace {

Matrix extract(const Matrix& m, const std::vector<int>& rows,
               const std::vector<int>& cols) {
  Matrix out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      out(static_cast<int>(a), static_cast<int>(b)) = m(rows[a], cols[b]);
  return out;
}

}  // namespace

Blocks block(const Matrix& m, const SubsetCut& cut) {
  require(m.square() && m.dim() == cut.n(), ErrorKind::kDimensionMismatch,
          "cut dimension does not match matrix");
  const auto s = cut.members();
  const auto sb = cut.complement_members();
  return {extract(m, s, s), extract(m, s, sb), extract(m, sb, s), extract(m, sb, sb)};
}

CutFlow cut_flow_mask(const Matrix& m, std::uint32_t mask) {
  CutFlow f{0.0, 0.0};
  const int n = m.dim();
  for (int i = 0; i < n; ++i) {
    const bool in_s = (mask >> i) & 1u;
    auto r = m.row(i);
    for (int j = 0; j < n; ++j) {
      const bool col_in_s = (mask >> j) & 1u;
      if (in_s && !col_in_s) f.into_complement += r[j];
      else if (!in_s && col_in_s) f.into_subset += r[j];
    }
  }
  return f;
}

CutFlow cut_flow(const Matrix& m, const SubsetCut& cut) {
  require(m.square() && m.dim() == cut.n(), ErrorKind::kDimensionMismatch,
          "cut dimension does not match matrix");
  return cut_flow_mask(m, cut.mask());
}

double deviation_from_stochasticity(const ChainWindow& chain) {
  double delta = 0.0;
  for (const auto& m : chain.stored()) {
    require(classify(m) != StochasticClass::kInvalid, ErrorKind::kInvalidInput,
            "negative row deficit: a row sum exceeds 1 + tol or an entry is negative");
    for (int i = 0; i < m.dim(); ++i) delta += std::max(0.0, 1.0 - m.row_sum(i));
  }
  return delta;
}

double strong_aperiodicity_gamma(const ChainWindow& chain) {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& m : chain.stored()) g = std::min(g, m.min_diagonal());
  return g;
}

}  // namespace chainlab
