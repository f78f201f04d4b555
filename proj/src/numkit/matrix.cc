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

#include "fedlora/numkit/matrix.h"

#include <cmath>
#include <cstring>
#include <utility>

#include "fedlora/common/error.h"

namespace fedlora::numkit {

namespace {

void require_positive_dims(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw ShapeError("matrix dimensions must be positive, got " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void require_same_shape(const Matrix& lhs, const Matrix& rhs, const char* op) {
  if (!lhs.same_shape(rhs)) {
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     lhs.shape_string() + " vs " + rhs.shape_string());
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
  require_positive_dims(rows, cols);
  data_.assign(rows * cols, 0.0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  require_positive_dims(rows, cols);
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) +
                     " does not match shape " + shape_string());
  }
  check_finite(data_, "matrix data");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool Matrix::operator==(const Matrix& other) const {
  return same_shape(other) &&
         (data_.empty() ||
          std::memcmp(data_.data(), other.data_.data(),
                      data_.size() * sizeof(double)) == 0);
}

Matrix matmul(const Matrix& lhs, const Matrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw ShapeError("matmul: shape mismatch " + lhs.shape_string() + " x " +
                     rhs.shape_string());
  }
  const std::size_t m = lhs.rows();
  const std::size_t n = lhs.cols();
  const std::size_t p = rhs.cols();
  Matrix out(m, p);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) acc += lhs.at(i, l) * rhs.at(l, j);
      out.at(i, j) = acc;
    }
  }
  check_finite(out.data(), "matmul result");
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out.at(j, i) = m.at(i, j);
  }
  return out;
}

Matrix add(const Matrix& lhs, const Matrix& rhs) {
  require_same_shape(lhs, rhs, "add");
  Matrix out = lhs;
  auto o = out.data();
  auto r = rhs.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += r[i];
  check_finite(out.data(), "add result");
  return out;
}

Matrix subtract(const Matrix& lhs, const Matrix& rhs) {
  require_same_shape(lhs, rhs, "subtract");
  Matrix out = lhs;
  auto o = out.data();
  auto r = rhs.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= r[i];
  check_finite(out.data(), "subtract result");
  return out;
}

Matrix scale(const Matrix& m, double factor) {
  Matrix out = m;
  for (double& v : out.data()) v *= factor;
  check_finite(out.data(), "scale result");
  return out;
}

void axpy(double factor, const Matrix& rhs, Matrix& lhs) {
  require_same_shape(lhs, rhs, "axpy");
  auto o = lhs.data();
  auto r = rhs.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += factor * r[i];
  check_finite(lhs.data(), "axpy result");
}

double global_l2_norm(std::span<const Matrix* const> tensors) {
  if (tensors.empty()) throw ParamError("global_l2_norm: no tensors given");
  double sum_sq = 0.0;
  for (const Matrix* t : tensors) {
    for (double v : t->data()) sum_sq += v * v;
  }
  return std::sqrt(sum_sq);
}

double global_l2_norm(std::span<const Matrix> tensors) {
  std::vector<const Matrix*> ptrs;
  ptrs.reserve(tensors.size());
  for (const Matrix& t : tensors) ptrs.push_back(&t);
  return global_l2_norm(std::span<const Matrix* const>(ptrs));
}

double frobenius_norm(const Matrix& m) {
  const Matrix* one[] = {&m};
  return global_l2_norm(std::span<const Matrix* const>(one));
}

void check_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NumericError(std::string(what) + ": non-finite value at index " +
                         std::to_string(i));
    }
  }
}

}  // namespace fedlora::numkit
