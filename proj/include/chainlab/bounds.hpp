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

// Constructive lower bounds on backward products of strongly aperiodic,
// approximately reciprocal, approximately stochastic chains.

#pragma once

#include "chainlab/chain.hpp"

namespace chainlab {

/// M(eps) = ln(1/eps) / (1 - eps), the smallest rate with
/// 1 - x >= exp(-M x) on [0, 1 - eps]. Requires 0 < eps < 1.
double m_of_eps(double eps);

/// Lower bound (1/2) eta_i eta_j delta on B_ji(sigma:0) for a substochastic
/// sequence whose diagonal products stay above eta_i, eta_j and whose
/// accumulated (j, i) entries reach delta. Requires 0 < delta < eta_j.
double lemma4_path_bound(double eta_i, double eta_j, double delta);

/// Arguments of the product lower bound eta_n(gamma, p0, beta, delta).
struct EtaParams {
  int n = 1;
  double gamma = 0.5;  // diagonal floor, in (0, 1)
  double p0 = 0.5;     // reciprocity ratio, in (0, 1)
  double beta = 1.0;   // reciprocity slack, > 0
  double delta = 0.0;  // deviation from stochasticity, >= 0
};

void validate(const EtaParams& params);

/// Largest n accepted by eta_n. The recursion visits roughly 3^(n-1)
/// distinct (dimension, beta, delta) states.
inline constexpr int kMaxEtaDim = 12;

struct EtaValue {
  double log_value = 0.0;  // ln eta, always finite
  double value = 1.0;      // exp(log_value); 0 when it underflows
  bool underflow = false;
};

/// eta_1 = exp(-M(gamma) delta); for n >= 2 the bound built from
/// eta_min = min(eta_B, eta_C) over all smaller dimensions with shifted
/// constants. Evaluated in log space and memoised per call.
EtaValue eta_n(const EtaParams& params);

struct ProductBoundWitness {
  Index t1 = 0;
  Index t2 = 0;
  int i = 0;
  double value = 1.0;
};

struct ProductBoundCheck {
  bool holds = true;
  ProductBoundWitness worst;
};

/// Checks (A(t2:t1))_ii >= eta for all t0 <= t1 <= t2 <= horizon.
ProductBoundCheck verify_product_lower_bound(const ChainWindow& chain, double eta,
                                             Index horizon);

/// Same scan with the threshold given as ln eta, so bounds that underflow
/// in linear space are still compared exactly.
ProductBoundCheck verify_product_lower_bound_log(const ChainWindow& chain,
                                                 double log_eta, Index horizon);

}  // namespace chainlab
