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

// Command-line front end. Argument parsing lives in tools/; this is the
// dispatch layer, callable from tests.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chainlab/chain.hpp"

namespace chainlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

struct RunConfig {
  std::string subcommand;

  // Exactly one of input or family.
  std::optional<std::string> input;
  std::optional<std::string> family;
  std::string params;
  std::uint64_t seed = 0;
  int n = 2;
  std::optional<Index> count;

  std::optional<Index> horizon;
  double p0 = 1.0;
  double threshold = 1.0;
  double tol = 1e-9;
  std::string terminal;  // uniform | e<k> | comma list; empty = unset

  // simulate / rate
  std::string x0;
  int trials = 32;
  double delta = 0.1;
  std::string flow_mode = "cross-flow";

  // bound
  double gamma = 0.5;
  double beta = 1.0;
  double deviation = 0.0;

  // continuous time
  std::string grid;
  std::optional<double> grid_step;
  double tau = 0.0;
  std::optional<double> t;

  std::optional<std::string> output;
};

std::vector<std::string> subcommands();

/// Runs one subcommand. Results go to `out` unless config.output is set;
/// errors go to `err` as "error[<kind>]: message". Returns the exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Terminal vector for "uniform", "e<k>" (1-based) or comma-separated reals.
Vector parse_terminal(const std::string& text, int n);

}  // namespace chainlab
