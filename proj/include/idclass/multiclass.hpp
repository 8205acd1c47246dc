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

#ifndef IDCLASS_MULTICLASS_HPP_
#define IDCLASS_MULTICLASS_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "idclass/features.hpp"
#include "idclass/gbdt.hpp"
#include "idclass/types.hpp"

namespace idclass {

enum class Framework { kSingle, kOva, kOvo };

std::string_view to_string(Framework f);
std::optional<Framework> parse_framework(std::string_view s);

/// Number of base learners a framework builds for K classes.
int learner_count(Framework f, int num_classes);

/// Pairs (i, j), i < j, in lexicographic order. Learner p of an OVO model
/// treats pairs[p].first as its positive class.
std::vector<std::pair<Label, Label>> class_pairs(int num_classes);

struct MulticlassModel {
  Framework framework = Framework::kSingle;
  int num_classes = kNumIdentityClasses;
  std::vector<std::string> class_names;
  FeatureCategory category = FeatureCategory::kAll;
  std::vector<std::string> feature_names;
  /// Single: one softmax model. OVA: learner k is class k vs rest.
  /// OVO: learner p is pairs[p].first vs pairs[p].second.
  std::vector<BoostedModel> learners;
  std::vector<std::pair<Label, Label>> pairs;

  int num_features() const { return static_cast<int>(feature_names.size()); }
};

struct Prediction {
  Label label = 0;
  /// Single/OVA: per-class probabilities. OVO: votes / (K(K-1)/2).
  Vector scores;
};

/// Trains the framework's base learners on X (already projected to
/// `category`). Throws "MissingClass" if any of the K classes is absent.
MulticlassModel train_framework(Framework framework, const Matrix& X,
                                std::span<const Label> y, const GbdtParams& params,
                                std::uint64_t seed,
                                int num_classes = kNumIdentityClasses,
                                FeatureCategory category = FeatureCategory::kAll);

/// Argmax with ties to the lowest index.
Label argmax(const Vector& scores);

/// One-vs-one aggregation. `positive_proba[p]` is learner p's probability of
/// pairs[p].first. A learner votes for its first class when that probability
/// is >= 0.5. Most votes wins; ties go to the larger summed pairwise
/// probability, then to the lower class index.
Prediction aggregate_ovo(std::span<const double> positive_proba,
                         std::span<const std::pair<Label, Label>> pairs,
                         int num_classes);

/// Throws "SchemaMismatch".
Prediction predict(const MulticlassModel& model, const Vector& x);

std::vector<Prediction> predict_batch(const MulticlassModel& model,
                                      const Matrix& X);

}  // namespace idclass

#endif  // IDCLASS_MULTICLASS_HPP_
