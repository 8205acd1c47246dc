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

#ifndef IDCLASS_EVALUATION_HPP_
#define IDCLASS_EVALUATION_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "idclass/features.hpp"
#include "idclass/gbdt.hpp"
#include "idclass/multiclass.hpp"
#include "idclass/types.hpp"

namespace idclass {

struct FoldAssignment {
  int num_folds = 0;
  std::uint64_t seed = 0;
  std::vector<int> fold_of;

  std::vector<Index> test_rows(int fold) const;
  std::vector<Index> train_rows(int fold) const;
};

/// Stratified assignment: each class's indices are shuffled and dealt
/// round-robin. The deal starts at a seeded fold for the first class and each
/// later class continues where the previous one stopped, so per-class and
/// per-fold counts both differ by at most one. Throws "TooFewSamples".
FoldAssignment stratified_folds(std::span<const Label> y, int num_folds,
                                std::uint64_t seed);

/// M(i, j) = #(true = i, predicted = j). Throws "LengthMismatch",
/// "LabelOutOfRange".
CountMatrix confusion_matrix(std::span<const Label> y_true,
                             std::span<const Label> y_pred, int num_classes);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct Metrics {
  CountMatrix confusion;
  std::int64_t n = 0;
  double accuracy = 0.0;
  double micro_f1_all = 0.0;
  /// Micro F1 pooled over the relevant classes only (by default every class
  /// but `none` when K = 4).
  double micro_f1_relevant = 0.0;
  double macro_f1 = 0.0;
  std::vector<ClassMetrics> per_class;
};

/// Classes pooled into micro_f1_relevant by default.
std::vector<Label> default_relevant_classes(int num_classes);

/// Throws "EmptyMatrix" when the matrix sums to zero.
Metrics compute_metrics(const CountMatrix& confusion);
Metrics compute_metrics(const CountMatrix& confusion,
                        std::span<const Label> relevant);

struct CvReport {
  Framework framework = Framework::kSingle;
  FeatureCategory category = FeatureCategory::kAll;
  int num_folds = 0;
  std::uint64_t seed = 0;
  int learners_per_model = 0;
  std::vector<Metrics> per_fold;
  Metrics aggregate;  // metrics of the summed confusion matrix
  double mean_fold_accuracy = 0.0;
  double std_fold_accuracy = 0.0;  // sample standard deviation
};

/// Produces (train features, test features) for one fold; lets a caller
/// rebuild fold-dependent features such as a per-fold embedding.
using FoldFeatureFn = std::function<std::pair<Matrix, Matrix>(
    std::span<const Index> train_rows, std::span<const Index> test_rows)>;

/// Stratified F-fold cross-validation over the full 15-column feature matrix,
/// projected to `category` before training.
CvReport cross_validate(Framework framework, FeatureCategory category,
                        const Matrix& X, std::span<const Label> y,
                        const GbdtParams& params, int num_folds,
                        std::uint64_t seed,
                        int num_classes = kNumIdentityClasses);

CvReport cross_validate(Framework framework, FeatureCategory category,
                        const FoldFeatureFn& features, std::span<const Label> y,
                        const GbdtParams& params, int num_folds,
                        std::uint64_t seed,
                        int num_classes = kNumIdentityClasses);

/// Plain-text table: one row per (framework, feature category) with accuracy
/// and F1 columns in percent.
std::string format_results_table(std::span<const CvReport> reports);

}  // namespace idclass

#endif  // IDCLASS_EVALUATION_HPP_
