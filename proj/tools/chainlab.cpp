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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "chainlab/cli.hpp"

int main(int argc, char** argv) {
  chainlab::RunConfig cfg;
  CLI::App app{"chainlab: analysis of time-varying stochastic chains"};
  std::string names;
  for (const auto& s : chainlab::subcommands()) names += (names.empty() ? "" : ", ") + s;

  app.add_option("subcommand", cfg.subcommand, "one of: " + names)->required();
  app.add_option("--input", cfg.input, "chain-spec file (continuous-time spec for ct-*)");
  app.add_option("--family", cfg.family, "generator family");
  app.add_option("--params", cfg.params, "comma-separated generator parameters");
  app.add_option("--seed", cfg.seed, "64-bit seed");
  app.add_option("--n", cfg.n, "dimension for --family and bound");
  app.add_option("--count", cfg.count, "matrices to generate");
  app.add_option("--horizon", cfg.horizon, "end of the analysis window (exclusive)");
  app.add_option("--p0", cfg.p0, "reciprocity ratio");
  app.add_option("--threshold", cfg.threshold, "flow-graph edge threshold");
  app.add_option("--tol", cfg.tol, "row-grouping tolerance");
  app.add_option("--terminal", cfg.terminal, "uniform, e<k> or comma-separated vector");
  app.add_option("--x0", cfg.x0, "comma-separated initial state");
  app.add_option("--trials", cfg.trials, "randomized trials");
  app.add_option("--delta", cfg.delta, "epoch threshold");
  app.add_option("--flow-mode", cfg.flow_mode, "cross-flow or literal");
  app.add_option("--gamma", cfg.gamma, "diagonal floor for bound");
  app.add_option("--beta", cfg.beta, "reciprocity slack for bound");
  app.add_option("--deviation", cfg.deviation, "deviation from stochasticity for bound");
  app.add_option("--grid", cfg.grid, "sample-grid file");
  app.add_option("--grid-step", cfg.grid_step, "uniform sample-grid spacing");
  app.add_option("--tau", cfg.tau, "start time for ct-phi");
  app.add_option("--t", cfg.t, "end time for ct-phi");
  app.add_option("--output", cfg.output, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << '\n';
    return chainlab::kExitError;
  }
  return chainlab::run(cfg, std::cout, std::cerr);
}
