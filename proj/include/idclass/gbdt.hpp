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

#ifndef IDCLASS_GBDT_HPP_
#define IDCLASS_GBDT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "idclass/types.hpp"

namespace idclass {

struct GbdtParams {
  int n_estimators = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  double lambda = 1.0;  // L2 penalty on leaf values
  double gamma = 0.0;   // minimum split gain
  int min_samples_leaf = 1;
};

void validate(const GbdtParams& params);

/// Regression tree stored as a flat node array; node 0 is the root. A split
/// sends x left iff x[feature] <= threshold.
class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }
  };

  RegressionTree() : nodes_(1) {}
  explicit RegressionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  static RegressionTree leaf(double value) {
    RegressionTree t;
    t.nodes_[0].value = value;
    return t;
  }

  template <typename Derived>
  int leaf_index(const Eigen::MatrixBase<Derived>& x) const {
    int i = 0;
    while (!nodes_[i].is_leaf()) {
      const Node& n = nodes_[i];
      i = x(n.feature) <= n.threshold ? n.left : n.right;
    }
    return i;
  }

  template <typename Derived>
  double predict(const Eigen::MatrixBase<Derived>& x) const {
    return nodes_[leaf_index(x)].value;
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  int depth() const;

 private:
  std::vector<Node> nodes_;
};

/// Exact-greedy second-order tree fit. Split gain is
/// G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda), accepted when
/// > gamma; leaf value is -G/(H+lambda). Candidate thresholds are midpoints of
/// consecutive distinct values; gain ties go to the lower feature index, then
/// the lower threshold. Throws "EmptyData".
RegressionTree fit_tree(const Matrix& X, const Vector& gradients,
                        const Vector& hessians, const GbdtParams& params);

enum class Objective { kBinaryLogistic, kSoftmax };

struct BoostedModel {
  Objective objective = Objective::kBinaryLogistic;
  int num_classes = 2;
  int num_features = 0;
  double learning_rate = 0.1;
  GbdtParams params;
  /// One prior margin (binary) or K (softmax).
  Vector base_score;
  /// rounds[r] holds one tree (binary) or K trees (softmax).
  std::vector<std::vector<RegressionTree>> rounds;

  int margin_size() const {
    return objective == Objective::kSoftmax ? num_classes : 1;
  }
};

/// Logistic boosting on 0/1 labels. `seed` is accepted for interface
/// stability; fitting is deterministic and uses no randomness. Throws
/// "SingleClass".
BoostedModel fit_gbdt_binary(const Matrix& X, std::span<const Label> y,
                             const GbdtParams& params, std::uint64_t seed = 0);

/// Softmax boosting with one tree per class per round. Throws "SingleClass"
/// or "MissingClass".
BoostedModel fit_gbdt_softmax(const Matrix& X, std::span<const Label> y,
                              int num_classes, const GbdtParams& params,
                              std::uint64_t seed = 0);

/// Margins using the first `max_rounds` rounds (all when negative). Throws
/// "SchemaMismatch".
Vector predict_margin(const BoostedModel& model, const Vector& x,
                      int max_rounds = -1);

/// Binary: a 1-vector holding P(y = 1). Softmax: the K class probabilities.
Vector predict_proba(const BoostedModel& model, const Vector& x,
                     int max_rounds = -1);

/// Mean training log-loss of the model truncated to `max_rounds`.
double log_loss(const BoostedModel& model, const Matrix& X,
                std::span<const Label> y, int max_rounds = -1);

}  // namespace idclass

#endif  // IDCLASS_GBDT_HPP_
