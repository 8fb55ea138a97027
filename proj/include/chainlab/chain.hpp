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

// Chain primitives: classification, time-indexed chains with extension
// rules, backward products, cut blocks and cut flows.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "chainlab/matrix.hpp"

namespace chainlab {

using Index = std::int64_t;

/// Row-sum tolerance used when classifying a matrix.
inline constexpr double kTolStoch = 1e-9;
inline constexpr int kMaxDim = 32;

enum class StochasticClass { kStochastic, kSubstochastic, kInvalid };

/// Stochastic iff nonnegative and every row sums to 1 within tol;
/// substochastic iff nonnegative and every row sum is at most 1 + tol.
StochasticClass classify(const Matrix& m, double tol = kTolStoch);
std::string_view to_string(StochasticClass c);

void require_stochastic(const Matrix& m, double tol = kTolStoch);
void require_substochastic(const Matrix& m, double tol = kTolStoch);

bool is_stochastic_vector(const Vector& v, double tol = kTolStoch);

enum class Extension { kNone, kIdentity, kRepeat, kCycle, kGenerator };

std::string_view to_string(Extension e);
Extension parse_extension(std::string_view s);

/// Source of A(t) for arbitrary t, used by the generator extension rule.
class MatrixSource {
 public:
  virtual ~MatrixSource() = default;
  virtual int dim() const = 0;
  virtual Matrix at(Index t) const = 0;
  /// Text describing the source, written into chain-spec headers.
  virtual std::vector<std::pair<std::string, std::string>> header() const = 0;
};

/// A(t0), ..., A(T-1) plus a rule for t >= T. Immutable after construction.
class ChainWindow {
 public:
  ChainWindow(Index t0, std::vector<Matrix> matrices,
              Extension extension = Extension::kNone,
              std::shared_ptr<const MatrixSource> source = nullptr);

  /// A(t) = m for t in [t0, t0 + count), repeated afterwards.
  static ChainWindow constant(const Matrix& m, Index count = 1, Index t0 = 0);

  int dim() const { return dim_; }
  Index t0() const { return t0_; }
  /// One past the last stored index (T).
  Index end() const { return t0_ + static_cast<Index>(matrices_.size()); }
  Index length() const { return static_cast<Index>(matrices_.size()); }
  Extension extension() const { return extension_; }
  const std::shared_ptr<const MatrixSource>& source() const { return source_; }
  const std::vector<Matrix>& stored() const { return matrices_; }

  /// True when A(t) is defined.
  bool covers(Index t) const;
  /// True when every A(t) with t in [t0, t_end) is defined.
  bool reaches(Index t_end) const;

  Matrix at(Index t) const;

  /// A(first), ..., A(last - 1).
  std::vector<Matrix> materialize(Index first, Index last) const;

 private:
  Index t0_;
  int dim_;
  std::vector<Matrix> matrices_;
  Extension extension_;
  std::shared_ptr<const MatrixSource> source_;
  Matrix identity_;
};

/// Nonempty proper subset S of {0, ..., n-1} stored as a bitmask.
class SubsetCut {
 public:
  SubsetCut(int n, std::uint32_t members);

  static SubsetCut of(int n, std::initializer_list<int> members);

  int n() const { return n_; }
  std::uint32_t mask() const { return mask_; }
  std::uint32_t complement_mask() const { return full_mask(n_) & ~mask_; }
  bool contains(int i) const { return (mask_ >> i) & 1u; }
  SubsetCut complement() const { return {n_, complement_mask()}; }
  std::vector<int> members() const;
  std::vector<int> complement_members() const;

  static std::uint32_t full_mask(int n) {
    return n >= 32 ? 0xFFFFFFFFu : ((1u << n) - 1u);
  }

 private:
  int n_;
  std::uint32_t mask_;
};

/// Cut masks scanned by reciprocity and epoch computations.
struct CutFamily {
  std::vector<std::uint32_t> masks;
  bool exhaustive = true;
};

inline constexpr int kExhaustiveCutLimit = 16;
inline constexpr int kSampledCutCount = 1 << 14;
inline constexpr std::uint64_t kDefaultCutSeed = 0x5eed'c0de'1234'5678ULL;

/// Every nonempty proper subset for n <= 16 (both orientations, ascending
/// mask order); otherwise singletons, complements of singletons and a
/// seeded uniform sample of 2^14 masks.
CutFamily cut_family(int n, std::uint64_t seed = kDefaultCutSeed);

/// A(t2:t1) = A(t2-1) ... A(t1), with A(t:t) = I.
Matrix backward_product(const ChainWindow& chain, Index t1, Index t2);

struct Blocks {
  Matrix s;           // A_S
  Matrix s_sbar;      // A_{S Sbar}
  Matrix sbar_s;      // A_{Sbar S}
  Matrix sbar;        // A_{Sbar}
};

Blocks block(const Matrix& m, const SubsetCut& cut);

struct CutFlow {
  double into_complement;  // 1^T A_{S Sbar} 1
  double into_subset;      // 1^T A_{Sbar S} 1
};

CutFlow cut_flow(const Matrix& m, const SubsetCut& cut);
/// Same as cut_flow but keyed directly by mask; no validation.
CutFlow cut_flow_mask(const Matrix& m, std::uint32_t mask);

/// Sum over the stored window of 1^T (1 - A(t) 1).
double deviation_from_stochasticity(const ChainWindow& chain);

/// min over stored t and i of a_ii(t).
double strong_aperiodicity_gamma(const ChainWindow& chain);

}  // namespace chainlab
