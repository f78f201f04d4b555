// Copyright 2026 The FedLoRA Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEDLORA_NUMKIT_MATRIX_H_
#define FEDLORA_NUMKIT_MATRIX_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fedlora::numkit {

// Dense row-major matrix of doubles.
//
// Every constructor and arithmetic helper in this module rejects non-finite
// entries with NumericError, so a Matrix that escapes numkit is always
// finite. Element access through `at()` and `data()` is unchecked for
// finiteness; code that writes through them owns that invariant.
class Matrix {
 public:
  Matrix() = default;
  // Zero-filled. Both dimensions must be positive.
  Matrix(std::size_t rows, std::size_t cols);
  // Takes ownership of `data`, which must hold rows*cols finite values.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix zeros(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols);
  }
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  // "RxC", used in error messages.
  std::string shape_string() const;
  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  // Bitwise equality of shape and every entry.
  bool operator==(const Matrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Standard product. The inner index is summed in ascending order so results
// are reproducible regardless of caller or thread.
Matrix matmul(const Matrix& lhs, const Matrix& rhs);

Matrix transpose(const Matrix& m);

// Elementwise helpers; all require equal shapes.
Matrix add(const Matrix& lhs, const Matrix& rhs);
Matrix subtract(const Matrix& lhs, const Matrix& rhs);
Matrix scale(const Matrix& m, double factor);
// lhs += factor * rhs, in place.
void axpy(double factor, const Matrix& rhs, Matrix& lhs);

// sqrt of the sum of squares of every entry of every tensor, visiting
// tensors in order and entries in row-major order. Empty input is an error.
double global_l2_norm(std::span<const Matrix> tensors);
double global_l2_norm(std::span<const Matrix* const> tensors);

double frobenius_norm(const Matrix& m);

// Throws NumericError naming `what` if any entry is NaN or Inf.
void check_finite(std::span<const double> values, const char* what);

}  // namespace fedlora::numkit

#endif  // FEDLORA_NUMKIT_MATRIX_H_
