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

#include "chainlab/chain_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include "chainlab/error.hpp"
#include "chainlab/random_chains.hpp"

namespace chainlab {

namespace {

class Tokens {
 public:
  explicit Tokens(std::istream& in) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) items_.push_back({tok, line_no});
    }
    require(!in.bad(), ErrorKind::kIo, "read failure");
  }

  bool done() const { return pos_ == items_.size(); }

  const std::string& peek() const {
    require(!done(), ErrorKind::kParse, "unexpected end of input");
    return items_[pos_].text;
  }

  std::string next() {
    peek();
    return items_[pos_++].text;
  }

  int line() const { return done() ? (items_.empty() ? 0 : items_.back().line) : items_[pos_].line; }

  double real() {
    const int at = line();
    const std::string tok = next();
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(v))
      fail(ErrorKind::kParse, "line " + std::to_string(at) + ": malformed real '" + tok + "'");
    return v;
  }

  template <typename Int>
  Int integer() {
    const int at = line();
    const std::string tok = next();
    Int v{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      fail(ErrorKind::kParse, "line " + std::to_string(at) + ": malformed integer '" + tok + "'");
    return v;
  }

  void expect(std::string_view key) {
    const int at = line();
    const std::string tok = next();
    if (tok != key)
      fail(ErrorKind::kParse, "line " + std::to_string(at) + ": expected '" +
                                  std::string(key) + "', found '" + tok + "'");
  }

 private:
  struct Item {
    std::string text;
    int line;
  };
  std::vector<Item> items_;
  std::size_t pos_ = 0;
};

bool is_key(const std::string& tok) {
  return !tok.empty() && std::isalpha(static_cast<unsigned char>(tok[0])) &&
         tok != "nan" && tok != "inf" && tok != "infinity";
}

Matrix read_matrix(Tokens& tok, int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (tok.done())
        fail(ErrorKind::kDimensionMismatch,
             "input ended at row " + std::to_string(i + 1) + " of a " + std::to_string(n) +
                 "x" + std::to_string(n) + " matrix");
      m(i, j) = tok.real();
    }
  return m;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_real(m(i, j));
    out << '\n';
  }
}

}  // namespace

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ChainWindow read_chain(std::istream& in) {
  Tokens tok(in);
  std::map<std::string, std::string> header;
  while (!tok.done() && is_key(tok.peek())) {
    const int at = tok.line();
    std::string key = tok.next();
    if (header.contains(key))
      fail(ErrorKind::kParse, "line " + std::to_string(at) + ": duplicate field '" + key + "'");
    header[key] = tok.next();
  }
  const auto field = [&](const std::string& key) -> const std::string* {
    auto it = header.find(key);
    return it == header.end() ? nullptr : &it->second;
  };
  for (const auto& [key, value] : header) {
    static const char* known[] = {"n", "t0", "count", "extension", "family", "params", "seed"};
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    require(ok, ErrorKind::kParse, "unknown header field '" + key + "'");
  }
  const auto as_int = [](const std::string& s, const char* name) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    require(ec == std::errc{} && ptr == s.data() + s.size(), ErrorKind::kParse,
            std::string("malformed value for ") + name + ": '" + s + "'");
    return v;
  };
  require(field("n") && field("count"), ErrorKind::kParse,
          "chain spec needs 'n' and 'count' header fields");
  const auto n = as_int(*field("n"), "n");
  require(n >= 1 && n <= kMaxDim, ErrorKind::kInvalidInput, "n must lie in [1, 32]");
  const auto count = as_int(*field("count"), "count");
  require(count >= 0, ErrorKind::kInvalidInput, "count must be nonnegative");
  const Index t0 = field("t0") ? as_int(*field("t0"), "t0") : 0;
  const Extension ext = field("extension") ? parse_extension(*field("extension"))
                                           : Extension::kNone;

  std::shared_ptr<const MatrixSource> source;
  if (ext == Extension::kGenerator) {
    require(field("family") && field("seed"), ErrorKind::kParse,
            "generator extension needs 'family' and 'seed' header fields");
    GeneratorSpec spec;
    spec.family = parse_family(*field("family"));
    spec.n = static_cast<int>(n);
    spec.params = field("params") ? parse_params(*field("params")) : std::vector<double>{};
    const std::string& seed = *field("seed");
    const auto [ptr, ec] = std::from_chars(seed.data(), seed.data() + seed.size(), spec.seed);
    require(ec == std::errc{} && ptr == seed.data() + seed.size(), ErrorKind::kParse,
            "malformed seed '" + seed + "'");
    source = generate(spec, 0, t0).source();
  } else {
    require(!field("family") && !field("params") && !field("seed"), ErrorKind::kParse,
            "family/params/seed are only valid with the generator extension");
  }

  std::vector<Matrix> matrices;
  matrices.reserve(static_cast<std::size_t>(count));
  for (long long k = 0; k < count; ++k) {
    if (tok.done())
      fail(ErrorKind::kDimensionMismatch, "expected " + std::to_string(count) +
                                              " matrices of size " + std::to_string(n) +
                                              ", input ended in matrix " + std::to_string(k + 1));
    matrices.push_back(read_matrix(tok, static_cast<int>(n)));
  }
  if (!tok.done())
    fail(ErrorKind::kDimensionMismatch,
         "line " + std::to_string(tok.line()) + ": data beyond " + std::to_string(count) +
             " matrices of size " + std::to_string(n));
  return ChainWindow(t0, std::move(matrices), ext, std::move(source));
}

void write_chain(std::ostream& out, const ChainWindow& chain) {
  out << "n " << chain.dim() << '\n';
  out << "t0 " << chain.t0() << '\n';
  out << "count " << chain.length() << '\n';
  out << "extension " << to_string(chain.extension()) << '\n';
  if (chain.extension() == Extension::kGenerator) {
    for (const auto& [k, v] : chain.source()->header()) out << k << ' ' << v << '\n';
  }
  for (const auto& m : chain.stored()) write_matrix(out, m);
}

CtChain read_ct_chain(std::istream& in, std::vector<double> grid) {
  Tokens tok(in);
  tok.expect("n");
  const int n = tok.integer<int>();
  require(n >= 1 && n <= kMaxDim, ErrorKind::kInvalidInput, "n must lie in [1, 32]");
  tok.expect("segments");
  const int count = tok.integer<int>();
  require(count >= 1, ErrorKind::kInvalidInput, "need at least one segment");
  std::vector<CtSegment> segments;
  for (int s = 0; s < count; ++s) {
    if (tok.done())
      fail(ErrorKind::kDimensionMismatch, "input ended before segment " + std::to_string(s + 1));
    tok.expect("duration");
    CtSegment seg;
    seg.duration = tok.real();
    seg.generator = read_matrix(tok, n);
    segments.push_back(std::move(seg));
  }
  if (!tok.done())
    fail(ErrorKind::kDimensionMismatch,
         "line " + std::to_string(tok.line()) + ": data beyond " + std::to_string(count) +
             " segments of size " + std::to_string(n));
  return CtChain(std::move(segments), std::move(grid));
}

void write_ct_chain(std::ostream& out, const CtChain& chain) {
  out << "n " << chain.dim() << '\n';
  out << "segments " << chain.segments().size() << '\n';
  for (const auto& s : chain.segments()) {
    out << "duration " << format_real(s.duration) << '\n';
    write_matrix(out, s.generator);
  }
}

std::vector<double> read_grid(std::istream& in) {
  Tokens tok(in);
  std::vector<double> grid;
  while (!tok.done()) grid.push_back(tok.real());
  return grid;
}

void write_grid(std::ostream& out, const std::vector<double>& grid) {
  for (double t : grid) out << format_real(t) << '\n';
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIo, "cannot open '" + path.string() + "'");
  return in;
}

ChainWindow read_chain_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_chain(in);
}

CtChain read_ct_chain_file(const std::filesystem::path& path, std::vector<double> grid) {
  auto in = open_input(path);
  return read_ct_chain(in, std::move(grid));
}

std::vector<double> read_grid_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_grid(in);
}

}  // namespace chainlab
