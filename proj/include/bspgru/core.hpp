// Copyright 2026 The bspgru Authors
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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bspgru {

using Index = Eigen::Index;

// Weight storage is row-major so that a matrix row is one contiguous span,
// which is the unit the sparse kernels and the serializers work on.
template <typename Scalar>
using Matrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using VectorXd = Vector<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch or a violated precondition.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// NaN or Inf where finite values are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Training or an ADMM phase produced a non-finite loss or iterate.
class DivergenceError : public NumericError {
 public:
  explicit DivergenceError(const std::string& what, int epoch = -1)
      : NumericError(epoch >= 0 ? what + " (epoch " + std::to_string(epoch) + ")" : what),
        epoch_(epoch) {}
  /// Epoch at which the failure was observed, or -1 outside epoch loops.
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

/// Requested sparsity cannot be realised for the given shape.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const char* message) {
  if (!condition) throw InvariantError(message);
}
inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvariantError(message);
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& x) {
  for (Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(static_cast<double>(x.derived().data()[i]))) return false;
  }
  return true;
}

template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& x, const char* what) {
  if (!all_finite(x)) throw NumericError(std::string("non-finite values in ") + what);
}

/// Row-by-row matrix-vector product with a fixed accumulation order:
/// each output starts at zero and adds w(i,j)*x(j) for ascending j.
/// The sparse executor reproduces this order, so dense and BSPC inference
/// agree bitwise when nothing is pruned.
template <typename Scalar>
Vector<Scalar> ordered_matvec(const Matrix<Scalar>& w, const Vector<Scalar>& x) {
  require(w.cols() == x.size(), "ordered_matvec: dimension mismatch");
  Vector<Scalar> y(w.rows());
  const Scalar* xd = x.data();
  for (Index i = 0; i < w.rows(); ++i) {
    const Scalar* row = w.data() + i * w.cols();
    Scalar acc = Scalar(0);
    for (Index j = 0; j < w.cols(); ++j) acc += row[j] * xd[j];
    y[i] = acc;
  }
  return y;
}

}  // namespace bspgru
