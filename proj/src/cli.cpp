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

#include "chainlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "chainlab/absolute_probability.hpp"
#include "chainlab/bounds.hpp"
#include "chainlab/chain_io.hpp"
#include "chainlab/continuous_time.hpp"
#include "chainlab/dynamics.hpp"
#include "chainlab/error.hpp"
#include "chainlab/flow_graph.hpp"
#include "chainlab/prng.hpp"
#include "chainlab/random_chains.hpp"
#include "chainlab/reciprocity.hpp"

namespace chainlab {

namespace {

struct Output {
  std::ostringstream text;
  int status = kExitOk;
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::string members(std::uint32_t mask, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (!((mask >> i) & 1u)) continue;
    if (!s.empty()) s += ',';
    s += std::to_string(i + 1);
  }
  return s;
}

std::string partition_text(const Partition& p) {
  std::string s;
  for (const auto& part : p) {
    s += '{';
    for (std::size_t k = 0; k < part.size(); ++k) {
      if (k) s += ',';
      s += std::to_string(part[k] + 1);
    }
    s += '}';
  }
  return s;
}

Vector parse_reals(const std::string& text) { return parse_params(text); }

class Runner {
 public:
  explicit Runner(const RunConfig& cfg) : cfg_(cfg) {}

  void header(std::ostream& os, std::initializer_list<std::pair<std::string, std::string>> extra) {
    os << "# chainlab " << cfg_.subcommand;
    if (cfg_.input) os << " input=" << *cfg_.input;
    if (cfg_.family) {
      os << " family=" << *cfg_.family << " n=" << cfg_.n << " params=" << cfg_.params
         << " seed=" << cfg_.seed;
    }
    for (const auto& [k, v] : extra) os << ' ' << k << '=' << v;
    os << '\n';
  }

  void require_single_source(bool allow_none = false) const {
    const int sources = (cfg_.input ? 1 : 0) + (cfg_.family ? 1 : 0);
    require(sources == 1 || (allow_none && sources == 0), ErrorKind::kInvalidInput,
            "exactly one input source required: --input or --family");
  }

  ChainWindow chain() const {
    require_single_source();
    if (cfg_.input) return read_chain_file(*cfg_.input);
    GeneratorSpec spec;
    spec.family = parse_family(*cfg_.family);
    spec.n = cfg_.n;
    spec.params = parse_params(cfg_.params);
    spec.seed = cfg_.seed;
    return generate(spec, cfg_.count.value_or(0));
  }

  CtChain ct_chain(bool with_grid) const {
    require(cfg_.input.has_value() && !cfg_.family, ErrorKind::kInvalidInput,
            "continuous-time subcommands read --input");
    CtChain c = read_ct_chain_file(*cfg_.input);
    if (!with_grid) return c;
    return c.with_grid(grid(c.end()));
  }

  std::vector<double> grid(double end) const {
    require(cfg_.grid.empty() != !cfg_.grid_step.has_value(), ErrorKind::kInvalidInput,
            "give exactly one of --grid or --grid-step");
    if (!cfg_.grid.empty()) return read_grid_file(cfg_.grid);
    const double h = *cfg_.grid_step;
    require(h > 0.0 && std::isfinite(h), ErrorKind::kDomain, "grid step must be positive");
    std::vector<double> g;
    const auto steps = static_cast<long long>(std::floor(end / h * (1.0 + 1e-12)));
    for (long long k = 0; k <= steps; ++k) g.push_back(std::min(end, static_cast<double>(k) * h));
    return g;
  }

  Index horizon(const ChainWindow& c) const {
    const Index h = cfg_.horizon.value_or(c.end());
    require(cfg_.horizon.has_value() || c.length() > 0, ErrorKind::kInvalidInput,
            "--horizon is required for a generated chain without stored matrices");
    require(h >= 1, ErrorKind::kDomain, "horizon must be >= 1");
    require(h > c.t0(), ErrorKind::kDomain, "horizon must exceed the chain start");
    return h;
  }

  Vector terminal(int n) const {
    return cfg_.terminal.empty() ? uniform_vector(n) : parse_terminal(cfg_.terminal, n);
  }

  void validate(Output& o) {
    const ChainWindow c = chain();
    const Index h = horizon(c);
    const auto ms = c.materialize(c.t0(), h);
    StochasticClass worst = StochasticClass::kStochastic;
    double gamma = std::numeric_limits<double>::infinity();
    for (const auto& m : ms) {
      const auto k = classify(m);
      if (k == StochasticClass::kInvalid || worst == StochasticClass::kStochastic) worst = k;
      gamma = std::min(gamma, m.min_diagonal());
    }
    double deviation = 0.0;
    if (worst != StochasticClass::kInvalid) {
      deviation = deviation_from_stochasticity(ChainWindow(c.t0(), ms));
    }
    header(o.text, {{"horizon", std::to_string(h)}});
    o.text << "n\tt0\tcount\textension\tclass\tgamma\tdeviation\n";
    o.text << c.dim() << '\t' << c.t0() << '\t' << c.length() << '\t' << to_string(c.extension())
           << '\t' << to_string(worst) << '\t' << format_real(gamma) << '\t'
           << (worst == StochasticClass::kInvalid ? "nan" : format_real(deviation)) << '\n';
    if (worst == StochasticClass::kInvalid) o.status = kExitNegative;
  }

  void reciprocity(Output& o) {
    const ChainWindow c = chain();
    const Index h = horizon(c);
    header(o.text, {{"p0", format_real(cfg_.p0)}, {"horizon", std::to_string(h)}});
    ReciprocityCertificate half;
    ReciprocityCertificate full;
    bool bounded = true;
    if (h - c.t0() >= 2) {
      const auto trend = reciprocity_trend(c, cfg_.p0, h);
      half = trend.half;
      full = trend.full;
      bounded = trend.bounded;
    } else {
      full = half = approximate_reciprocity_beta(c, cfg_.p0, h);
    }
    o.text << "p0\thorizon\tbeta_half\tbeta_full\tbounded\twitness_set\twitness_start\t"
              "witness_end\texhaustive\n";
    o.text << format_real(cfg_.p0) << '\t' << h << '\t' << format_real(half.beta_required)
           << '\t' << format_real(full.beta_required) << '\t' << yes_no(bounded) << '\t'
           << (full.witness_mask ? members(full.witness_mask, c.dim()) : "-") << '\t'
           << full.witness_start << '\t' << full.witness_end << '\t'
           << yes_no(full.exhaustive) << '\n';
    if (!bounded) o.status = kExitNegative;
  }

  void aps(Output& o) {
    const ChainWindow c = chain();
    const Index h = horizon(c);
    const ApsTrace trace = aps_backward(c, c.t0(), h, terminal(c.dim()));
    header(o.text, {{"horizon", std::to_string(h)},
                    {"terminal", cfg_.terminal.empty() ? "uniform" : cfg_.terminal}});
    o.text << "# p_star=" << format_real(trace.p_star)
           << " residual=" << format_real(trace.residual)
           << " mass_drift=" << format_real(trace.mass_drift) << '\n';
    trace.write_tsv(o.text);
  }

  void pstar(Output& o) {
    const ChainWindow c = chain();
    const Index h = horizon(c);
    std::optional<Vector> term;
    if (!cfg_.terminal.empty()) term = parse_terminal(cfg_.terminal, c.dim());
    const PStarVerdict v = class_pstar_verdict(c, cfg_.p0, h, term);
    header(o.text, {{"p0", format_real(cfg_.p0)}, {"horizon", std::to_string(h)}});
    o.text << "gamma\tbeta\tbeta_bounded\teta\tln_eta";
    for (const auto& [T, p] : v.p_star_trend) o.text << "\tp_star_T" << T;
    o.text << "\tp_star_empirical\tp_star_stable\tin_pstar\n";
    o.text << format_real(v.gamma) << '\t' << format_real(v.beta) << '\t'
           << yes_no(v.beta_bounded) << '\t'
           << (v.eta_theoretical ? format_real(v.eta_theoretical->value) : "na") << '\t'
           << (v.eta_theoretical ? format_real(v.eta_theoretical->log_value) : "na");
    for (const auto& [T, p] : v.p_star_trend) o.text << '\t' << format_real(p);
    o.text << '\t' << format_real(v.p_star_empirical) << '\t' << yes_no(v.p_star_stable)
           << '\t' << yes_no(v.in_pstar) << '\n';
    if (!v.in_pstar) o.status = kExitNegative;
  }

  void flowgraph(Output& o) {
    const ChainWindow c = chain();
    const Index h = horizon(c);
    const FlowGraph g = build_flow_graph(c, h, cfg_.threshold);
    header(o.text, {{"horizon", std::to_string(h)}, {"threshold", format_real(cfg_.threshold)}});
    o.text << "# components=" << partition_text(connected_components(g)) << '\n';
    g.write_tsv(o.text);
  }

  void classes(Output& o) {
    const ChainWindow c = chain();
    const Index h = horizon(c);
    const ErgodicClasses e = ergodic_classes(c, h, cfg_.tol, cfg_.threshold);
    header(o.text, {{"horizon", std::to_string(h)},
                    {"tol", format_real(cfg_.tol)},
                    {"threshold", format_real(cfg_.threshold)}});
    o.text << "# classes=" << partition_text(e.classes)
           << " flow_components=" << partition_text(e.flow_components)
           << " class_ergodic=" << yes_no(e.class_ergodic)
           << " grouping_stable=" << yes_no(e.grouping_stable)
           << " cauchy_gap=" << format_real(e.cauchy_gap)
           << " agrees_with_flow_graph=" << yes_no(e.agrees_with_flow_graph) << '\n';
    std::vector<int> cls(static_cast<std::size_t>(c.dim()));
    std::vector<int> comp(cls.size());
    for (std::size_t k = 0; k < e.classes.size(); ++k)
      for (int i : e.classes[k]) cls[static_cast<std::size_t>(i)] = static_cast<int>(k) + 1;
    for (std::size_t k = 0; k < e.flow_components.size(); ++k)
      for (int i : e.flow_components[k]) comp[static_cast<std::size_t>(i)] = static_cast<int>(k) + 1;
    o.text << "node\tclass\tflow_component\n";
    for (std::size_t i = 0; i < cls.size(); ++i)
      o.text << (i + 1) << '\t' << cls[i] << '\t' << comp[i] << '\n';
    if (!e.class_ergodic) o.status = kExitNegative;
  }

  Vector initial_state(int n) const {
    if (!cfg_.x0.empty()) {
      Vector x = parse_reals(cfg_.x0);
      require(static_cast<int>(x.size()) == n, ErrorKind::kDimensionMismatch,
              "--x0 length does not match chain dimension");
      return x;
    }
    CounterRng rng(cfg_.seed, 0);
    Vector x(static_cast<std::size_t>(n));
    for (auto& v : x) v = 2.0 * rng.uniform() - 1.0;
    return x;
  }

  void simulate_cmd(Output& o) {
    const ChainWindow c = chain();
    const Index h = horizon(c);
    const Trajectory traj = simulate(c, c.t0(), initial_state(c.dim()), h);
    header(o.text, {{"horizon", std::to_string(h)}});
    if (cfg_.terminal.empty()) {
      traj.write_tsv(o.text);
    } else {
      const ApsTrace trace = aps_backward(c, c.t0(), h, terminal(c.dim()));
      traj.write_tsv(o.text, &trace);
    }
  }

  void rate(Output& o) {
    const ChainWindow c = chain();
    const Index h = horizon(c);
    const ApsTrace trace = aps_backward(c, c.t0(), h, terminal(c.dim()));
    const FlowMode mode = parse_flow_mode(cfg_.flow_mode);
    const EpochSchedule epochs = epoch_times(c, cfg_.delta, h, mode);
    double gamma = std::numeric_limits<double>::infinity();
    for (const auto& m : c.materialize(c.t0(), h)) gamma = std::min(gamma, m.min_diagonal());
    const ContractionResult r = contraction_check(c, trace, epochs.times, gamma, trace.p_star,
                                                  cfg_.delta, 1.0, cfg_.trials, cfg_.seed);
    header(o.text, {{"horizon", std::to_string(h)},
                    {"delta", format_real(cfg_.delta)},
                    {"flow_mode", std::string(to_string(mode))},
                    {"trials", std::to_string(cfg_.trials)}});
    o.text << "# gamma=" << format_real(gamma) << " p_star=" << format_real(trace.p_star)
           << " bound=" << format_real(r.bound) << " holds=" << yes_no(r.holds)
           << " slack=" << format_real(r.slack) << '\n';
    if (!epochs.diagnostic.empty()) o.text << "# epochs: " << epochs.diagnostic << '\n';
    if (!r.diagnostic.empty()) o.text << "# contraction: " << r.diagnostic << '\n';
    o.text << "q\tt_q\tratio\tbound\n";
    for (std::size_t q = 0; q < epochs.times.size(); ++q)
      o.text << (q + 1) << '\t' << epochs.times[q] << '\t' << format_real(r.per_epoch_ratio[q])
             << '\t' << format_real(r.bound) << '\n';
    if (!r.holds) o.status = kExitNegative;
  }

  void bound(Output& o) {
    require_single_source(true);
    std::optional<ChainWindow> c;
    int n = cfg_.n;
    if (cfg_.input || cfg_.family) {
      c.emplace(chain());
      n = c->dim();
    }
    const EtaValue eta = eta_n({n, cfg_.gamma, cfg_.p0, cfg_.beta, cfg_.deviation});
    header(o.text, {});
    o.text << "n\tgamma\tp0\tbeta\tdelta\teta\tln_eta\tunderflow";
    if (c) o.text << "\tholds\tworst_t1\tworst_t2\tworst_i\tworst_value";
    o.text << '\n';
    o.text << n << '\t' << format_real(cfg_.gamma) << '\t' << format_real(cfg_.p0) << '\t'
           << format_real(cfg_.beta) << '\t' << format_real(cfg_.deviation) << '\t'
           << format_real(eta.value) << '\t' << format_real(eta.log_value) << '\t'
           << yes_no(eta.underflow);
    if (c) {
      const auto check = verify_product_lower_bound_log(*c, eta.log_value, horizon(*c));
      o.text << '\t' << yes_no(check.holds) << '\t' << check.worst.t1 << '\t' << check.worst.t2
             << '\t' << (check.worst.i + 1) << '\t' << format_real(check.worst.value);
      if (!check.holds) o.status = kExitNegative;
    }
    o.text << '\n';
  }

  void ct_phi(Output& o) {
    const CtChain c = ct_chain(false);
    const double t = cfg_.t.value_or(c.end());
    const TransitionOperator op = transition(c, cfg_.tau, t);
    header(o.text, {{"tau", format_real(cfg_.tau)}, {"t", format_real(t)}});
    o.text << "# step_count=" << op.step_count
           << " max_local_error=" << format_real(op.max_local_error)
           << " clamped=" << op.clamped << '\n';
    o.text << "i";
    for (int j = 0; j < c.dim(); ++j) o.text << "\tphi_" << (j + 1);
    o.text << '\n';
    for (int i = 0; i < c.dim(); ++i) {
      o.text << (i + 1);
      for (int j = 0; j < c.dim(); ++j) o.text << '\t' << format_real(op.matrix(i, j));
      o.text << '\n';
    }
  }

  void ct_sample(Output& o) {
    const CtChain c = ct_chain(true);
    const ChainWindow d = sample_discrete(c);
    header(o.text, {{"grid_points", std::to_string(c.grid().size())}});
    o.text << "# M=" << format_real(uniform_bound_M(c)) << '\n';
    write_chain(o.text, d);
  }

  void ct_reciprocity(Output& o) {
    const CtChain c = ct_chain(true);
    const auto& g = c.grid();
    require(g.size() >= 2, ErrorKind::kInvalidInput, "scan needs at least two grid times");
    const ReciprocityCertificate full = ct_reciprocity_beta(c, cfg_.p0);
    ReciprocityCertificate half = full;
    const std::size_t intervals = g.size() - 1;
    if (intervals >= 2) {
      const std::vector<double> prefix(g.begin(),
                                       g.begin() + static_cast<long>(intervals / 2 + 1));
      half = ct_reciprocity_beta(c.with_grid(prefix), cfg_.p0);
    }
    const bool bounded = beta_growth_is_bounded(half.beta_required, full.beta_required);
    header(o.text, {{"p0", format_real(cfg_.p0)}, {"grid_points", std::to_string(g.size())}});
    o.text << "p0\tintervals\tbeta_half\tbeta_full\tbounded\tM\twitness_set\twitness_start\t"
              "witness_end\n";
    o.text << format_real(cfg_.p0) << '\t' << intervals << '\t'
           << format_real(half.beta_required) << '\t' << format_real(full.beta_required) << '\t'
           << yes_no(bounded) << '\t' << format_real(uniform_bound_M(c)) << '\t'
           << (full.witness_mask ? members(full.witness_mask, c.dim()) : "-") << '\t'
           << full.witness_start << '\t' << full.witness_end << '\n';
    if (!bounded) o.status = kExitNegative;
  }

  void generate_cmd(Output& o) {
    require(cfg_.family.has_value() && !cfg_.input, ErrorKind::kInvalidInput,
            "generate needs --family and no --input");
    const Index count = cfg_.count.value_or(cfg_.horizon.value_or(0));
    require(count >= 1, ErrorKind::kInvalidInput, "generate needs --count or --horizon >= 1");
    GeneratorSpec spec;
    spec.family = parse_family(*cfg_.family);
    spec.n = cfg_.n;
    spec.params = parse_params(cfg_.params);
    spec.seed = cfg_.seed;
    header(o.text, {{"count", std::to_string(count)}});
    write_chain(o.text, generate(spec, count));
  }

 private:
  const RunConfig& cfg_;
};

using Handler = void (Runner::*)(Output&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"validate", &Runner::validate},
      {"reciprocity", &Runner::reciprocity},
      {"aps", &Runner::aps},
      {"pstar", &Runner::pstar},
      {"flowgraph", &Runner::flowgraph},
      {"classes", &Runner::classes},
      {"simulate", &Runner::simulate_cmd},
      {"rate", &Runner::rate},
      {"bound", &Runner::bound},
      {"ct-phi", &Runner::ct_phi},
      {"ct-sample", &Runner::ct_sample},
      {"ct-reciprocity", &Runner::ct_reciprocity},
      {"generate", &Runner::generate_cmd},
  };
  return table;
}

}  // namespace

std::vector<std::string> subcommands() {
  std::vector<std::string> out;
  for (const auto& [name, h] : handlers()) out.push_back(name);
  return out;
}

Vector parse_terminal(const std::string& text, int n) {
  if (text == "uniform") return uniform_vector(n);
  if (text.size() >= 2 && text[0] == 'e' && text.find(',') == std::string::npos) {
    const std::string digits = text.substr(1);
    require(std::all_of(digits.begin(), digits.end(), ::isdigit), ErrorKind::kParse,
            "malformed terminal '" + text + "'");
    const int k = std::stoi(digits);
    require(k >= 1 && k <= n, ErrorKind::kIndexOutOfRange, "terminal basis index out of range");
    return basis_vector(n, k - 1);
  }
  Vector v = parse_params(text);
  require(static_cast<int>(v.size()) == n, ErrorKind::kDimensionMismatch,
          "terminal length does not match chain dimension");
  require(is_stochastic_vector(v), ErrorKind::kNotStochastic, "terminal vector is not stochastic");
  return v;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const auto& table = handlers();
    const auto it = table.find(config.subcommand);
    require(it != table.end(), ErrorKind::kInvalidInput,
            "unknown subcommand '" + config.subcommand + "'");
    Output o;
    Runner runner(config);
    (runner.*(it->second))(o);
    if (config.output) {
      std::ofstream file(*config.output, std::ios::binary);
      require(file.good(), ErrorKind::kIo, "cannot write '" + *config.output + "'");
      file << o.text.str();
      require(file.good(), ErrorKind::kIo, "write failed for '" + *config.output + "'");
    } else {
      out << o.text.str();
    }
    return o.status;
  } catch (const Error& e) {
    err << "error[" << to_string(e.kind()) << "]: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace chainlab
