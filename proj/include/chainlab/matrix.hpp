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

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace chainlab {

using Vector = std::vector<double>;

/// Dense row-major real matrix. Square matrices are the common case; the
/// rectangular shape only appears for cut blocks.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0);
  explicit Matrix(int n, double fill = 0.0) : Matrix(n, n, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  /// Dimension of a square matrix.
  int dim() const { return rows_; }
  bool square() const { return rows_ == cols_; }

  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& operator()(int i, int j) { return data_[index(i, j)]; }

  std::span<const double> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * cols_,
            static_cast<std::size_t>(cols_)};
  }
  std::span<double> row(int i) {
    return {data_.data() + static_cast<std::size_t>(i) * cols_,
            static_cast<std::size_t>(cols_)};
  }
  std::span<const double> data() const { return data_; }

  double row_sum(int i) const;
  /// 1^T M 1, accumulated row by row in index order.
  double total() const;
  double min_diagonal() const;

  Matrix transpose() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * cols_ + j;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// x^T M, the left action used by absolute probability recursions.
Vector left_multiply(const Vector& x, const Matrix& m);
/// M x.
Vector right_multiply(const Matrix& m, const Vector& x);

double max_abs_diff(const Matrix& a, const Matrix& b);
double l1_distance(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> v);

}  // namespace chainlab
