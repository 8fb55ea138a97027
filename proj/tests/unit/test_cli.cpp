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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "chainlab/cli.hpp"
#include "chainlab/error.hpp"

using namespace chainlab;

namespace {

const std::string kData = CHAINLAB_DATA_DIR;

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result invoke(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int status = run(cfg, out, err);
  return {status, out.str(), err.str()};
}

RunConfig on_file(std::string sub, const std::string& file) {
  RunConfig c;
  c.subcommand = std::move(sub);
  c.input = kData + "/" + file;
  return c;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, '\t');) v.push_back(f);
  return v;
}

/// Output without the parameter line, which names the input source.
std::string body(const std::string& text) { return text.substr(text.find('\n') + 1); }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("chainlab_test_" + name);
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("validate reports the shipped example") {
  const auto r = invoke(on_file("validate", "mixing2.chain"));
  CHECK(r.status == kExitOk);
  CHECK(r.err.empty());
  const auto l = lines(r.out);
  REQUIRE(l.size() == 3);
  CHECK(l[0].rfind("# chainlab validate", 0) == 0);
  CHECK(fields(l[1])[0] == "n");
  CHECK(fields(l[2])[0] == "2");
  CHECK(fields(l[2])[4] == "stochastic");
}

TEST_CASE("reciprocity on the one-directional example is negative") {
  auto cfg = on_file("reciprocity", "one_directional.chain");
  cfg.p0 = 0.5;
  cfg.horizon = 100;
  const auto r = invoke(cfg);
  CHECK(r.status == kExitNegative);
  const auto row = fields(lines(r.out).back());
  CHECK(row[2] == "12.5");
  CHECK(row[3] == "25");
  CHECK(row[4] == "false");

  auto mix = on_file("reciprocity", "mixing2.chain");
  mix.horizon = 50;
  CHECK(invoke(mix).status == kExitOk);
}

TEST_CASE("aps on the mixing example converges to the symmetric fixed point") {
  auto cfg = on_file("aps", "mixing2.chain");
  cfg.terminal = "uniform";
  cfg.horizon = 100;
  const auto r = invoke(cfg);
  CHECK(r.status == kExitOk);
  for (const auto& l : lines(r.out)) {
    const auto f = fields(l);
    if (f.size() >= 3 && f[0] == "0") {
      CHECK(std::stod(f[1]) == doctest::Approx(0.5).epsilon(1e-9));
      CHECK(std::stod(f[2]) == doctest::Approx(0.5).epsilon(1e-9));
    }
  }
}

TEST_CASE("every subcommand runs on shipped inputs") {
  struct Case {
    std::string sub, file;
  };
  const std::vector<Case> cases{
      {"validate", "two_state.chain"},   {"reciprocity", "two_state.chain"},
      {"aps", "two_state.chain"},        {"pstar", "mixing2.chain"},
      {"flowgraph", "mixing2.chain"},    {"classes", "mixing2.chain"},
      {"simulate", "mixing2.chain"},     {"rate", "mixing2.chain"},
      {"bound", "mixing2.chain"},        {"ct-phi", "two_node.ct"},
      {"ct-sample", "two_node.ct"},      {"ct-reciprocity", "two_node.ct"},
  };
  for (const auto& c : cases) {
    auto cfg = on_file(c.sub, c.file);
    cfg.horizon = 40;
    cfg.p0 = 0.5;
    if (c.sub == "simulate") cfg.x0 = "1,0";
    if (c.sub.rfind("ct-", 0) == 0) cfg.grid_step = 1.0;
    const auto r = invoke(cfg);
    INFO(c.sub, ": ", r.err);
    CHECK((r.status == kExitOk || r.status == kExitNegative));
    CHECK(r.out.rfind("# chainlab " + c.sub, 0) == 0);
  }
  RunConfig gen;
  gen.subcommand = "generate";
  gen.family = "lazy-random-walk";
  gen.params = "0.5,0.5";
  gen.n = 3;
  gen.count = 4;
  CHECK(invoke(gen).status == kExitOk);
  CHECK(subcommands().size() == 13);
}

TEST_CASE("errors carry distinct prefixes") {
  SUBCASE("unreadable input") {
    const auto r = invoke(on_file("validate", "does_not_exist.chain"));
    CHECK(r.status == kExitError);
    CHECK(r.err.rfind("error[io]:", 0) == 0);
    CHECK(r.out.empty());
  }
  SUBCASE("malformed spec") {
    const auto p = temp_path("bad.chain");
    write_file(p, "n 2\ncount 1\n0.5 0.5\n0.5 zero\n");
    RunConfig cfg;
    cfg.subcommand = "validate";
    cfg.input = p.string();
    const auto r = invoke(cfg);
    CHECK(r.status == kExitError);
    CHECK(r.err.rfind("error[parse]:", 0) == 0);
    std::filesystem::remove(p);
  }
  SUBCASE("dimension mismatch") {
    const auto p = temp_path("short.chain");
    write_file(p, "n 2\ncount 1\n0.5 0.5\n0.5\n");
    RunConfig cfg;
    cfg.subcommand = "validate";
    cfg.input = p.string();
    const auto r = invoke(cfg);
    CHECK(r.status == kExitError);
    CHECK(r.err.rfind("error[dimension]:", 0) == 0);
    std::filesystem::remove(p);
  }
  SUBCASE("terminal of the wrong length") {
    auto cfg = on_file("aps", "mixing2.chain");
    cfg.terminal = "0.2,0.3,0.5";
    const auto r = invoke(cfg);
    CHECK(r.status == kExitError);
    CHECK(r.err.rfind("error[dimension]:", 0) == 0);
  }
  SUBCASE("two input sources") {
    auto cfg = on_file("validate", "mixing2.chain");
    cfg.family = "identity";
    const auto r = invoke(cfg);
    CHECK(r.status == kExitError);
    CHECK(r.err.rfind("error[invalid-input]:", 0) == 0);
  }
  SUBCASE("unknown subcommand") {
    RunConfig cfg;
    cfg.subcommand = "frobnicate";
    CHECK(invoke(cfg).status == kExitError);
  }
  SUBCASE("horizon below one") {
    auto cfg = on_file("reciprocity", "mixing2.chain");
    cfg.horizon = 0;
    CHECK(invoke(cfg).status == kExitError);
  }
}

TEST_CASE("terminal parsing") {
  CHECK(parse_terminal("uniform", 4) == Vector(4, 0.25));
  CHECK(parse_terminal("e2", 3) == Vector{0.0, 1.0, 0.0});
  CHECK(parse_terminal("0.25,0.75", 2) == Vector{0.25, 0.75});
  CHECK_THROWS_AS(parse_terminal("e4", 3), Error);
  CHECK_THROWS_AS(parse_terminal("e0", 3), Error);
}

TEST_CASE("generated chains round-trip through every discrete subcommand") {
  const auto path = temp_path("generated.chain");
  RunConfig gen;
  gen.subcommand = "generate";
  gen.family = "gossip-pairs";
  gen.params = "0.8,0.3";
  gen.n = 3;
  gen.seed = 17;
  gen.count = 40;
  gen.output = path.string();
  REQUIRE(invoke(gen).status == kExitOk);

  for (const std::string sub : {"validate", "reciprocity", "aps", "pstar", "flowgraph",
                                "classes", "simulate", "rate", "bound"}) {
    RunConfig from_family = gen;
    from_family.subcommand = sub;
    from_family.output.reset();
    from_family.horizon = 40;
    from_family.p0 = 0.5;
    if (sub == "simulate") from_family.x0 = "1,0,-1";
    RunConfig from_file = from_family;
    from_file.family.reset();
    from_file.input = path.string();
    const auto a = invoke(from_family);
    const auto b = invoke(from_file);
    INFO(sub, ": ", a.err, b.err);
    CHECK(a.status == b.status);
    CHECK(body(a.out) == body(b.out));
  }
  std::filesystem::remove(path);
}

TEST_CASE("identical configs give byte-identical output") {
  RunConfig cfg;
  cfg.subcommand = "rate";
  cfg.family = "lazy-random-walk";
  cfg.params = "0.4,0.6";
  cfg.n = 4;
  cfg.seed = 5;
  cfg.horizon = 120;
  const auto a = invoke(cfg);
  const auto b = invoke(cfg);
  CHECK(a.out == b.out);
  CHECK(a.status == b.status);

  const auto path = temp_path("out.tsv");
  cfg.output = path.string();
  const auto c = invoke(cfg);
  CHECK(c.out.empty());
  std::ifstream in(path);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(written == a.out);
  std::filesystem::remove(path);
}
