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

#include "idclass/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "idclass/math.hpp"

namespace idclass {

void validate(const GbdtParams& p) {
  if (p.n_estimators < 0 || !(p.learning_rate > 0.0 && p.learning_rate <= 1.0) ||
      p.max_depth < 0 || p.lambda < 0.0 || p.min_samples_leaf < 1 ||
      !std::isfinite(p.gamma)) {
    throw Error("InvalidParams", "invalid boosting hyperparameters");
  }
}

int RegressionTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.is_leaf()) {
      deepest = std::max(deepest, d[i]);
      continue;
    }
    d[static_cast<std::size_t>(n.left)] = d[i] + 1;
    d[static_cast<std::size_t>(n.right)] = d[i] + 1;
  }
  return deepest;
}

namespace {

// Row indices of every feature column, sorted by (value, row).
using ColumnOrders = std::vector<std::vector<int>>;

ColumnOrders presort(const Matrix& X) {
  ColumnOrders orders(static_cast<std::size_t>(X.cols()));
  for (Index f = 0; f < X.cols(); ++f) {
    auto& order = orders[static_cast<std::size_t>(f)];
    order.resize(static_cast<std::size_t>(X.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return X(a, f) < X(b, f); });
  }
  return orders;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& X, const Vector& g, const Vector& h,
              const GbdtParams& params)
      : X_(X), g_(g), h_(h), params_(params),
        goes_left_(static_cast<std::size_t>(X.rows()), 0) {}

  RegressionTree build(ColumnOrders orders) {
    nodes_.clear();
    grow(std::move(orders), 0);
    return RegressionTree(std::move(nodes_));
  }

 private:
  double score(double G, double H) const {
    const double denom = H + params_.lambda;
    return denom > 0.0 ? G * G / denom : 0.0;
  }

  double leaf_value(double G, double H) const {
    const double denom = H + params_.lambda;
    return denom > 0.0 ? -G / denom : 0.0;
  }

  int grow(ColumnOrders orders, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    const std::vector<int>& rows = orders.empty() ? empty_ : orders[0];
    double G = 0.0;
    double H = 0.0;
    for (int r : rows) {
      G += g_(r);
      H += h_(r);
    }
    nodes_[static_cast<std::size_t>(id)].value = leaf_value(G, H);

    const auto n = static_cast<int>(rows.size());
    if (orders.empty() || depth >= params_.max_depth ||
        n < 2 * params_.min_samples_leaf) {
      return id;
    }

    const double parent = score(G, H);
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gain = params_.gamma;
    for (std::size_t f = 0; f < orders.size(); ++f) {
      const auto& order = orders[f];
      const auto col = static_cast<Index>(f);
      double GL = 0.0;
      double HL = 0.0;
      for (int i = 0; i + 1 < n; ++i) {
        const int r = order[static_cast<std::size_t>(i)];
        GL += g_(r);
        HL += h_(r);
        const double lo = X_(r, col);
        const double hi = X_(order[static_cast<std::size_t>(i) + 1], col);
        if (!(lo < hi)) continue;
        if (i + 1 < params_.min_samples_leaf ||
            n - i - 1 < params_.min_samples_leaf) {
          continue;
        }
        const double gain = score(GL, HL) + score(G - GL, H - HL) - parent;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          double mid = lo + (hi - lo) / 2.0;
          if (!(mid < hi)) mid = lo;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0) return id;

    for (int r : rows) {
      goes_left_[static_cast<std::size_t>(r)] =
          X_(r, best_feature) <= best_threshold ? 1 : 0;
    }
    ColumnOrders left(orders.size());
    ColumnOrders right(orders.size());
    for (std::size_t f = 0; f < orders.size(); ++f) {
      for (int r : orders[f]) {
        (goes_left_[static_cast<std::size_t>(r)] ? left[f] : right[f])
            .push_back(r);
      }
    }
    orders.clear();

    const int left_id = grow(std::move(left), depth + 1);
    const int right_id = grow(std::move(right), depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left_id;
    node.right = right_id;
    return id;
  }

  const Matrix& X_;
  const Vector& g_;
  const Vector& h_;
  const GbdtParams& params_;
  std::vector<char> goes_left_;
  std::vector<RegressionTree::Node> nodes_;
  const std::vector<int> empty_;
};

void check_fit_inputs(const Matrix& X, std::size_t n_labels) {
  if (X.rows() == 0) throw Error("EmptyData", "no training rows");
  if (static_cast<std::size_t>(X.rows()) != n_labels) {
    throw Error("LengthMismatch", "feature rows and labels differ in length");
  }
  if (!X.allFinite()) throw Error("NonFiniteFeature", "non-finite feature value");
}

}  // namespace

RegressionTree fit_tree(const Matrix& X, const Vector& gradients,
                        const Vector& hessians, const GbdtParams& params) {
  validate(params);
  if (X.rows() == 0) throw Error("EmptyData", "no training rows");
  if (gradients.size() != X.rows() || hessians.size() != X.rows()) {
    throw Error("LengthMismatch", "gradient/hessian length differs from rows");
  }
  if ((hessians.array() < 0.0).any()) {
    throw Error("InvalidParams", "hessians must be non-negative");
  }
  return TreeBuilder(X, gradients, hessians, params).build(presort(X));
}

BoostedModel fit_gbdt_binary(const Matrix& X, std::span<const Label> y,
                             const GbdtParams& params, std::uint64_t) {
  validate(params);
  check_fit_inputs(X, y.size());
  const Index n = X.rows();
  Vector target(n);
  for (Index i = 0; i < n; ++i) {
    const Label label = y[static_cast<std::size_t>(i)];
    if (label != 0 && label != 1) {
      throw Error("LabelOutOfRange", "binary labels must be 0 or 1");
    }
    target(i) = label;
  }
  const double mean = target.mean();
  if (mean == 0.0 || mean == 1.0) {
    throw Error("SingleClass", "binary training labels are constant");
  }

  BoostedModel model;
  model.objective = Objective::kBinaryLogistic;
  model.num_classes = 2;
  model.num_features = static_cast<int>(X.cols());
  model.learning_rate = params.learning_rate;
  model.params = params;
  model.base_score = Vector::Constant(1, logit(mean));

  const ColumnOrders orders = presort(X);
  Vector margin = Vector::Constant(n, model.base_score(0));
  Vector g(n);
  Vector h(n);
  for (int round = 0; round < params.n_estimators; ++round) {
    for (Index i = 0; i < n; ++i) {
      const double p = sigmoid(margin(i));
      g(i) = p - target(i);
      h(i) = p * (1.0 - p);
    }
    RegressionTree tree = TreeBuilder(X, g, h, params).build(orders);
    for (Index i = 0; i < n; ++i) {
      margin(i) += params.learning_rate * tree.predict(X.row(i));
    }
    model.rounds.push_back({std::move(tree)});
  }
  return model;
}

BoostedModel fit_gbdt_softmax(const Matrix& X, std::span<const Label> y,
                              int num_classes, const GbdtParams& params,
                              std::uint64_t) {
  validate(params);
  check_fit_inputs(X, y.size());
  if (num_classes < 2) throw Error("SingleClass", "softmax needs K >= 2");
  const Index n = X.rows();
  const Index K = num_classes;

  Vector counts = Vector::Zero(K);
  for (Label label : y) {
    if (label < 0 || label >= num_classes) {
      throw Error("LabelOutOfRange", "label outside 0..K-1");
    }
    counts(label) += 1.0;
  }
  for (Index k = 0; k < K; ++k) {
    if (counts(k) == 0.0) {
      throw Error(counts.maxCoeff() == static_cast<double>(n) ? "SingleClass"
                                                              : "MissingClass",
                  "class " + std::to_string(k) + " absent from training data");
    }
  }

  BoostedModel model;
  model.objective = Objective::kSoftmax;
  model.num_classes = num_classes;
  model.num_features = static_cast<int>(X.cols());
  model.learning_rate = params.learning_rate;
  model.params = params;
  model.base_score = (counts / static_cast<double>(n)).array().log().matrix();

  const ColumnOrders orders = presort(X);
  Matrix margins = model.base_score.transpose().replicate(n, 1);
  Matrix proba(n, K);
  Vector g(n);
  Vector h(n);
  for (int round = 0; round < params.n_estimators; ++round) {
    for (Index i = 0; i < n; ++i) {
      proba.row(i) = softmax(margins.row(i).transpose()).transpose();
    }
    std::vector<RegressionTree> trees;
    trees.reserve(static_cast<std::size_t>(K));
    for (Index k = 0; k < K; ++k) {
      for (Index i = 0; i < n; ++i) {
        const double p = proba(i, k);
        g(i) = p - (y[static_cast<std::size_t>(i)] == k ? 1.0 : 0.0);
        h(i) = p * (1.0 - p);
      }
      trees.push_back(TreeBuilder(X, g, h, params).build(orders));
    }
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < K; ++k) {
        margins(i, k) += params.learning_rate *
                         trees[static_cast<std::size_t>(k)].predict(X.row(i));
      }
    }
    model.rounds.push_back(std::move(trees));
  }
  return model;
}

Vector predict_margin(const BoostedModel& model, const Vector& x,
                      int max_rounds) {
  if (x.size() != model.num_features) {
    throw Error("SchemaMismatch",
                "expected " + std::to_string(model.num_features) +
                    " features, got " + std::to_string(x.size()));
  }
  const auto total = static_cast<int>(model.rounds.size());
  const int rounds = max_rounds < 0 ? total : std::min(max_rounds, total);
  Vector margin = model.base_score;
  for (int r = 0; r < rounds; ++r) {
    const auto& trees = model.rounds[static_cast<std::size_t>(r)];
    for (std::size_t k = 0; k < trees.size(); ++k) {
      margin(static_cast<Index>(k)) +=
          model.learning_rate * trees[k].predict(x);
    }
  }
  return margin;
}

Vector predict_proba(const BoostedModel& model, const Vector& x,
                     int max_rounds) {
  const Vector margin = predict_margin(model, x, max_rounds);
  if (model.objective == Objective::kSoftmax) return softmax(margin);
  return Vector::Constant(1, sigmoid(margin(0)));
}

double log_loss(const BoostedModel& model, const Matrix& X,
                std::span<const Label> y, int max_rounds) {
  double total = 0.0;
  for (Index i = 0; i < X.rows(); ++i) {
    const Vector p = predict_proba(model, X.row(i).transpose(), max_rounds);
    const Label label = y[static_cast<std::size_t>(i)];
    if (model.objective == Objective::kSoftmax) {
      total -= std::log(std::max(p(label), 1e-15));
    } else {
      total += binary_log_loss(p(0), label);
    }
  }
  return X.rows() == 0 ? 0.0 : total / static_cast<double>(X.rows());
}

}  // namespace idclass
