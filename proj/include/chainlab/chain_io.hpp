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

// Text formats for discrete chains, continuous-time chains and sample grids.
//
// Discrete chain-spec:
//   n <int>
//   t0 <int>                       (default 0)
//   count <int>
//   extension none|identity|repeat|cycle|generator   (default none)
//   family <name>                  (generator only)
//   params <r1,r2,...>             (generator only)
//   seed <uint64>                  (generator only)
//   count blocks of n rows of n reals
//
// Continuous-time chain-spec:
//   n <int>
//   segments <int>
//   per segment: `duration <real>` then n rows of n generator entries
//
// Grid: whitespace-separated increasing times.
//
// '#' starts a comment anywhere. Reals are written with 17 significant digits.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <istream>
#include <ostream>
#include <vector>

#include "chainlab/chain.hpp"
#include "chainlab/continuous_time.hpp"

namespace chainlab {

ChainWindow read_chain(std::istream& in);
void write_chain(std::ostream& out, const ChainWindow& chain);

CtChain read_ct_chain(std::istream& in, std::vector<double> grid = {});
void write_ct_chain(std::ostream& out, const CtChain& chain);

std::vector<double> read_grid(std::istream& in);
void write_grid(std::ostream& out, const std::vector<double>& grid);

/// Opens a file for reading; unreadable paths raise an io error.
std::ifstream open_input(const std::filesystem::path& path);

ChainWindow read_chain_file(const std::filesystem::path& path);
CtChain read_ct_chain_file(const std::filesystem::path& path, std::vector<double> grid = {});
std::vector<double> read_grid_file(const std::filesystem::path& path);

/// "%.17g".
std::string format_real(double x);

}  // namespace chainlab
