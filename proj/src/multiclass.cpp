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

#include "idclass/multiclass.hpp"

#include <string>

#include "idclass/random.hpp"

namespace idclass {

std::string_view to_string(Framework f) {
  switch (f) {
    case Framework::kSingle:
      return "single";
    case Framework::kOva:
      return "ova";
    case Framework::kOvo:
      return "ovo";
  }
  return "single";
}

std::optional<Framework> parse_framework(std::string_view s) {
  for (auto f : {Framework::kSingle, Framework::kOva, Framework::kOvo}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

int learner_count(Framework f, int k) {
  switch (f) {
    case Framework::kSingle:
      return 1;
    case Framework::kOva:
      return k;
    case Framework::kOvo:
      return k * (k - 1) / 2;
  }
  return 0;
}

std::vector<std::pair<Label, Label>> class_pairs(int num_classes) {
  std::vector<std::pair<Label, Label>> pairs;
  for (Label i = 0; i < num_classes; ++i) {
    for (Label j = i + 1; j < num_classes; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

MulticlassModel train_framework(Framework framework, const Matrix& X,
                                std::span<const Label> y,
                                const GbdtParams& params, std::uint64_t seed,
                                int num_classes, FeatureCategory category) {
  if (num_classes < 2) throw Error("MissingClass", "need at least 2 classes");
  if (static_cast<std::size_t>(X.rows()) != y.size()) {
    throw Error("LengthMismatch", "feature rows and labels differ in length");
  }
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (Label label : y) {
    if (label < 0 || label >= num_classes) {
      throw Error("LabelOutOfRange", "label outside 0..K-1");
    }
    ++counts[static_cast<std::size_t>(label)];
  }
  for (int k = 0; k < num_classes; ++k) {
    if (counts[static_cast<std::size_t>(k)] == 0) {
      throw Error("MissingClass",
                  "class " + std::to_string(k) + " absent from training data");
    }
  }

  MulticlassModel model;
  model.framework = framework;
  model.num_classes = num_classes;
  model.category = category;
  for (int k = 0; k < num_classes; ++k) {
    model.class_names.emplace_back(
        num_classes == kNumIdentityClasses
            ? std::string(kIdentityClassNames[static_cast<std::size_t>(k)])
            : "class_" + std::to_string(k));
  }
  if (X.cols() == kNumFeatures && category == FeatureCategory::kAll) {
    model.feature_names = category_feature_names(FeatureCategory::kAll);
  } else if (static_cast<Index>(category_columns(category).size()) == X.cols()) {
    model.feature_names = category_feature_names(category);
  } else {
    for (Index c = 0; c < X.cols(); ++c) {
      model.feature_names.push_back("f" + std::to_string(c));
    }
  }

  switch (framework) {
    case Framework::kSingle:
      model.learners.push_back(
          fit_gbdt_softmax(X, y, num_classes, params, splitmix64(seed)));
      break;
    case Framework::kOva:
      for (Label k = 0; k < num_classes; ++k) {
        Labels binary(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) binary[i] = y[i] == k;
        model.learners.push_back(fit_gbdt_binary(
            X, binary, params, splitmix64(seed + static_cast<unsigned>(k))));
      }
      break;
    case Framework::kOvo:
      model.pairs = class_pairs(num_classes);
      for (std::size_t p = 0; p < model.pairs.size(); ++p) {
        const auto [a, b] = model.pairs[p];
        std::vector<Index> rows;
        Labels binary;
        for (std::size_t i = 0; i < y.size(); ++i) {
          if (y[i] == a || y[i] == b) {
            rows.push_back(static_cast<Index>(i));
            binary.push_back(y[i] == a);
          }
        }
        const Matrix subset = X(rows, Eigen::all);
        model.learners.push_back(
            fit_gbdt_binary(subset, binary, params, splitmix64(seed + p)));
      }
      break;
  }
  return model;
}

Label argmax(const Vector& scores) {
  Label best = 0;
  for (Index k = 1; k < scores.size(); ++k) {
    if (scores(k) > scores(best)) best = static_cast<Label>(k);
  }
  return best;
}

Prediction aggregate_ovo(std::span<const double> positive_proba,
                         std::span<const std::pair<Label, Label>> pairs,
                         int num_classes) {
  Vector votes = Vector::Zero(num_classes);
  Vector mass = Vector::Zero(num_classes);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [a, b] = pairs[p];
    const double pa = positive_proba[p];
    votes(pa >= 0.5 ? a : b) += 1.0;
    mass(a) += pa;
    mass(b) += 1.0 - pa;
  }
  Label best = 0;
  for (Label k = 1; k < num_classes; ++k) {
    if (votes(k) > votes(best) ||
        (votes(k) == votes(best) && mass(k) > mass(best))) {
      best = k;
    }
  }
  Prediction out;
  out.label = best;
  out.scores = pairs.empty() ? votes : Vector(votes / static_cast<double>(pairs.size()));
  return out;
}

Prediction predict(const MulticlassModel& model, const Vector& x) {
  if (x.size() != model.num_features()) {
    throw Error("SchemaMismatch",
                "expected " + std::to_string(model.num_features()) +
                    " features, got " + std::to_string(x.size()));
  }
  Prediction out;
  switch (model.framework) {
    case Framework::kSingle:
      out.scores = predict_proba(model.learners.front(), x);
      out.label = argmax(out.scores);
      return out;
    case Framework::kOva:
      out.scores.resize(model.num_classes);
      for (int k = 0; k < model.num_classes; ++k) {
        out.scores(k) =
            predict_proba(model.learners[static_cast<std::size_t>(k)], x)(0);
      }
      out.label = argmax(out.scores);
      return out;
    case Framework::kOvo: {
      std::vector<double> proba(model.learners.size());
      for (std::size_t p = 0; p < model.learners.size(); ++p) {
        proba[p] = predict_proba(model.learners[p], x)(0);
      }
      return aggregate_ovo(proba, model.pairs, model.num_classes);
    }
  }
  return out;
}

std::vector<Prediction> predict_batch(const MulticlassModel& model,
                                      const Matrix& X) {
  std::vector<Prediction> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  for (Index i = 0; i < X.rows(); ++i) {
    out.push_back(predict(model, X.row(i).transpose()));
  }
  return out;
}

}  // namespace idclass
