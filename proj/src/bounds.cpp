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

#include "chainlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <tuple>

#include "chainlab/error.hpp"

namespace chainlab {

double m_of_eps(double eps) {
  require(eps > 0.0 && eps < 1.0, ErrorKind::kDomain, "M(eps) needs 0 < eps < 1");
  return -std::log(eps) / (1.0 - eps);
}

double lemma4_path_bound(double eta_i, double eta_j, double delta) {
  require(eta_i > 0.0 && eta_i <= 1.0 && eta_j > 0.0 && eta_j <= 1.0,
          ErrorKind::kDomain, "path bound needs eta_i, eta_j in (0, 1]");
  require(delta > 0.0 && delta < eta_j, ErrorKind::kDomain,
          "path bound needs 0 < delta < eta_j");
  return 0.5 * eta_i * eta_j * delta;
}

void validate(const EtaParams& p) {
  require(p.n >= 1 && p.n <= kMaxEtaDim, ErrorKind::kDomain,
          "eta_n supports 1 <= n <= " + std::to_string(kMaxEtaDim));
  require(p.gamma > 0.0 && p.gamma < 1.0, ErrorKind::kDomain, "gamma must lie in (0, 1)");
  require(p.p0 > 0.0 && p.p0 < 1.0, ErrorKind::kDomain, "p0 must lie in (0, 1)");
  require(p.beta > 0.0 && std::isfinite(p.beta), ErrorKind::kDomain,
          "beta must be positive and finite");
  require(p.delta >= 0.0 && std::isfinite(p.delta), ErrorKind::kDomain,
          "delta must be nonnegative and finite");
}

namespace {

class EtaRecursion {
 public:
  EtaRecursion(double gamma, double p0) : p0_(p0), rate_(m_of_eps(gamma)) {}

  double log_eta(int n, double beta, double delta) {
    if (n == 1) return -rate_ * delta;
    const auto key = std::make_tuple(n, beta, delta);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const double dn = static_cast<double>(n);
    const double shift_b = 2.0 * dn;
    const double shift_c = (2.0 * dn + beta) / p0_;
    double log_b = std::numeric_limits<double>::infinity();
    double log_c = std::numeric_limits<double>::infinity();
    for (int r = 1; r <= n - 1; ++r) {
      log_b = std::min(log_b, log_eta(r, beta + shift_b, delta + shift_b));
      log_c = std::min(log_c, log_eta(r, beta + shift_c, delta + shift_c));
    }
    const double log_min = std::min(log_b, log_c);
    const double log_step = std::min(-2.0 * std::log(dn), log_min - std::numbers::ln2);
    const double log_link = dn * log_min + 2.0 * log_min - std::numbers::ln2 + log_step;
    const double result = dn * log_link + dn * log_min - rate_ * delta;
    memo_.emplace(key, result);
    return result;
  }

 private:
  double p0_;
  double rate_;
  std::map<std::tuple<int, double, double>, double> memo_;
};

ProductBoundCheck scan_diagonal(const ChainWindow& chain, Index horizon,
                                const auto& passes) {
  require(horizon >= chain.t0(), ErrorKind::kIndexOutOfRange,
          "horizon precedes chain start");
  require(chain.reaches(horizon), ErrorKind::kIndexOutOfRange,
          "horizon unreachable for this chain");
  const auto matrices = chain.materialize(chain.t0(), horizon);
  const int n = chain.dim();
  ProductBoundCheck out;
  out.worst = {chain.t0(), chain.t0(), 0, 1.0};
  const Index steps = static_cast<Index>(matrices.size());
  for (Index a = 0; a < steps; ++a) {
    Matrix p = Matrix::identity(n);
    for (Index b = a; b < steps; ++b) {
      p = matrices[static_cast<std::size_t>(b)] * p;
      for (int i = 0; i < n; ++i) {
        if (p(i, i) < out.worst.value) {
          out.worst = {chain.t0() + a, chain.t0() + b + 1, i, p(i, i)};
        }
      }
    }
  }
  out.holds = passes(out.worst.value);
  return out;
}

}  // namespace

EtaValue eta_n(const EtaParams& params) {
  validate(params);
  EtaRecursion recursion(params.gamma, params.p0);
  EtaValue out;
  out.log_value = recursion.log_eta(params.n, params.beta, params.delta);
  out.value = std::exp(out.log_value);
  out.underflow = out.value == 0.0;
  return out;
}

ProductBoundCheck verify_product_lower_bound(const ChainWindow& chain, double eta,
                                             Index horizon) {
  return scan_diagonal(chain, horizon, [eta](double worst) { return worst >= eta; });
}

ProductBoundCheck verify_product_lower_bound_log(const ChainWindow& chain,
                                                 double log_eta, Index horizon) {
  return scan_diagonal(chain, horizon, [log_eta](double worst) {
    return worst > 0.0 && std::log(worst) >= log_eta;
  });
}

}  // namespace chainlab
