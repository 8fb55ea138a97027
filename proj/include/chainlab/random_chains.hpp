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

// Seeded generators for independent random chains and their expected chains.
//
// Family                 params   strongly aperiodic     E[A] reciprocal
// lazy-random-walk       s, q     when s > 0             yes (symmetric)
// gossip-pairs           p, w     when w < 1             yes (symmetric)
// one-directional-elite  w, r     when w < 1             no
// block-diagonal-mixers  b, s, q  when s > 0             yes (symmetric)
// static-perturbed       s, eps   when s > 0             yes (doubly stochastic)
// identity               -        yes                    yes
//
// lazy-random-walk: every agent samples each other agent with probability q;
//   with a nonempty sample it keeps weight s and spreads 1 - s uniformly over
//   the sample, otherwise it keeps weight 1.
// gossip-pairs: with probability p one uniform pair {i, j} averages with
//   weight w; otherwise A(t) = I.
// one-directional-elite: agent 1 never moves; each other agent listens to
//   agent 1 with probability r, putting weight w on it.
// block-diagonal-mixers: b contiguous blocks, each an independent
//   lazy-random-walk(s, q).
// static-perturbed: (1 - eps) C + eps P(t), C the lazy cycle with self
//   weight s and P(t) a row-wise uniform random assignment.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chainlab/chain.hpp"

namespace chainlab {

enum class Family {
  kLazyRandomWalk,
  kGossipPairs,
  kOneDirectionalElite,
  kBlockDiagonalMixers,
  kStaticPerturbed,
  kIdentity,
};

std::string_view to_string(Family f);
Family parse_family(std::string_view s);
std::vector<Family> all_families();

struct GeneratorSpec {
  Family family = Family::kIdentity;
  int n = 2;
  std::vector<double> params;
  std::uint64_t seed = 0;
};

void validate(const GeneratorSpec& spec);

/// Comma-separated reals, e.g. "0.5,0.25".
std::vector<double> parse_params(std::string_view text);
std::string format_params(const std::vector<double>& params);

/// The realization A(t) for replicate 0, or an independent copy of A(t)
/// for other replicates. Pure in (spec, t, replicate).
Matrix sample(const GeneratorSpec& spec, Index t, std::uint64_t replicate = 0);

/// Closed-form E[A(t)]; every family is time-homogeneous.
Matrix expected_matrix(const GeneratorSpec& spec);

/// Realization on [t0, t0 + count), extended by the generator afterwards.
ChainWindow generate(const GeneratorSpec& spec, Index count, Index t0 = 0);

/// Expected chain on [t0, t0 + count), repeated afterwards.
ChainWindow expected_chain(const GeneratorSpec& spec, Index count, Index t0 = 0);

struct FeedbackEstimate {
  /// min over i != j with E[a_ij] above the floor of E[a_ii a_ij] / E[a_ij].
  double gamma_hat = 1.0;
  double std_error = 0.0;
  bool vacuous = false;
  int i = -1;
  int j = -1;
};

/// Monte Carlo feedback coefficient of A(t) from `samples` replicates.
FeedbackEstimate feedback_coefficient(const GeneratorSpec& spec, int samples, Index t);

}  // namespace chainlab
