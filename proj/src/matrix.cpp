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

#include "chainlab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chainlab/error.hpp"

namespace chainlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kDimensionMismatch: return "dimension";
    case ErrorKind::kIndexOutOfRange: return "index-out-of-range";
    case ErrorKind::kNotStochastic: return "not-stochastic";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kInternal: return "internal";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * cols, fill) {
  require(rows >= 0 && cols >= 0, ErrorKind::kInvalidInput,
          "matrix dimensions must be nonnegative");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  data_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    require(static_cast<int>(r.size()) == cols_, ErrorKind::kDimensionMismatch,
            "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n, 0.0);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double Matrix::row_sum(int i) const {
  double s = 0.0;
  for (double v : row(i)) s += v;
  return s;
}

double Matrix::total() const {
  double s = 0.0;
  for (int i = 0; i < rows_; ++i) s += row_sum(i);
  return s;
}

double Matrix::min_diagonal() const {
  double g = std::numeric_limits<double>::infinity();
  for (int i = 0; i < std::min(rows_, cols_); ++i) g = std::min(g, (*this)(i, i));
  return g;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols_ == b.rows_, ErrorKind::kDimensionMismatch,
          "matrix product shape mismatch");
  Matrix c(a.rows_, b.cols_, 0.0);
  for (int i = 0; i < a.rows_; ++i) {
    auto out = c.row(i);
    for (int k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.row(k);
      for (int j = 0; j < b.cols_; ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_,
          ErrorKind::kDimensionMismatch, "matrix sum shape mismatch");
  Matrix c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] += b.data_[k];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require(a.rows_ == b.rows_ && a.cols_ == b.cols_,
          ErrorKind::kDimensionMismatch, "matrix difference shape mismatch");
  Matrix c = a;
  for (std::size_t k = 0; k < c.data_.size(); ++k) c.data_[k] -= b.data_[k];
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& v : c.data_) v *= s;
  return c;
}

Vector left_multiply(const Vector& x, const Matrix& m) {
  require(static_cast<int>(x.size()) == m.rows(), ErrorKind::kDimensionMismatch,
          "vector length does not match matrix rows");
  Vector y(static_cast<std::size_t>(m.cols()), 0.0);
  for (int i = 0; i < m.rows(); ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    if (xi == 0.0) continue;
    auto r = m.row(i);
    for (int j = 0; j < m.cols(); ++j) y[static_cast<std::size_t>(j)] += xi * r[j];
  }
  return y;
}

Vector right_multiply(const Matrix& m, const Vector& x) {
  require(static_cast<int>(x.size()) == m.cols(), ErrorKind::kDimensionMismatch,
          "vector length does not match matrix columns");
  Vector y(static_cast<std::size_t>(m.rows()), 0.0);
  for (int i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    auto r = m.row(i);
    for (int j = 0; j < m.cols(); ++j) s += r[j] * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          ErrorKind::kDimensionMismatch, "matrix comparison shape mismatch");
  double d = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) d = std::max(d, std::abs(da[k] - db[k]));
  return d;
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorKind::kDimensionMismatch,
          "vector length mismatch");
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += std::abs(a[k] - b[k]);
  return d;
}

double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace chainlab
