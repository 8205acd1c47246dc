// Copyright 2026 The idclass Authors.
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

#ifndef IDCLASS_MATH_HPP_
#define IDCLASS_MATH_HPP_

#include <Eigen/Dense>

#include <cmath>

namespace idclass {

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-x));
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

/// log(sigmoid(x)) without overflow for large |x|.
template <typename Scalar>
Scalar log_sigmoid(Scalar x) {
  if (x >= Scalar(0)) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

template <typename Scalar>
Scalar logit(Scalar p) {
  return std::log(p / (Scalar(1) - p));
}

/// Numerically stable softmax of a dense vector expression.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> softmax(
    const Eigen::MatrixBase<Derived>& margins) {
  using Scalar = typename Derived::Scalar;
  const Scalar peak = margins.maxCoeff();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e =
      (margins.array() - peak).exp().matrix();
  return e / e.sum();
}

/// Binary cross-entropy of probability `p` against a 0/1 label, clamped away
/// from log(0).
template <typename Scalar>
Scalar binary_log_loss(Scalar p, int label) {
  constexpr Scalar kEps = Scalar(1e-15);
  const Scalar q = label == 1 ? p : Scalar(1) - p;
  return -std::log(std::max(q, kEps));
}

}  // namespace idclass

#endif  // IDCLASS_MATH_HPP_
