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

#include "idclass/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "idclass/io.hpp"
#include "idclass/random.hpp"

namespace idclass {

std::vector<Index> FoldAssignment::test_rows(int fold) const {
  std::vector<Index> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) rows.push_back(static_cast<Index>(i));
  }
  return rows;
}

std::vector<Index> FoldAssignment::train_rows(int fold) const {
  std::vector<Index> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) rows.push_back(static_cast<Index>(i));
  }
  return rows;
}

FoldAssignment stratified_folds(std::span<const Label> y, int num_folds,
                                std::uint64_t seed) {
  if (num_folds < 1) throw Error("TooFewSamples", "need at least one fold");
  if (y.size() < static_cast<std::size_t>(num_folds)) {
    throw Error("TooFewSamples", std::to_string(y.size()) +
                                     " samples cannot fill " +
                                     std::to_string(num_folds) + " folds");
  }
  std::map<Label, std::vector<int>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) {
    by_class[y[i]].push_back(static_cast<int>(i));
  }

  FoldAssignment out;
  out.num_folds = num_folds;
  out.seed = seed;
  out.fold_of.assign(y.size(), 0);
  Rng rng(seed);
  std::uint64_t next = rng.below(static_cast<std::uint64_t>(num_folds));
  for (auto& [label, indices] : by_class) {
    rng.shuffle(std::span<int>(indices));
    for (int idx : indices) {
      out.fold_of[static_cast<std::size_t>(idx)] = static_cast<int>(next);
      next = (next + 1) % static_cast<std::uint64_t>(num_folds);
    }
  }
  return out;
}

CountMatrix confusion_matrix(std::span<const Label> y_true,
                             std::span<const Label> y_pred, int num_classes) {
  if (y_true.size() != y_pred.size()) {
    throw Error("LengthMismatch", "true and predicted labels differ in length");
  }
  CountMatrix m = CountMatrix::Zero(num_classes, num_classes);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const Label t = y_true[i];
    const Label p = y_pred[i];
    if (t < 0 || t >= num_classes || p < 0 || p >= num_classes) {
      throw Error("LabelOutOfRange", "label outside 0..K-1");
    }
    ++m(t, p);
  }
  return m;
}

std::vector<Label> default_relevant_classes(int num_classes) {
  std::vector<Label> out;
  const int last = num_classes == kNumIdentityClasses
                       ? static_cast<int>(IdentityClass::kNone)
                       : num_classes;
  for (Label k = 0; k < last; ++k) out.push_back(k);
  return out;
}

Metrics compute_metrics(const CountMatrix& confusion) {
  const auto relevant =
      default_relevant_classes(static_cast<int>(confusion.rows()));
  return compute_metrics(confusion, relevant);
}

namespace {

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// 2TP / (2TP + FP + FN): the harmonic mean of pooled precision and recall.
double pooled_f1(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  return ratio(2 * tp, 2 * tp + fp + fn);
}

}  // namespace

Metrics compute_metrics(const CountMatrix& m,
                        std::span<const Label> relevant) {
  if (m.rows() != m.cols()) {
    throw Error("LengthMismatch", "confusion matrix must be square");
  }
  if ((m.array() < 0).any()) {
    throw Error("LabelOutOfRange", "confusion matrix has negative counts");
  }
  Metrics out;
  out.confusion = m;
  out.n = m.sum();
  if (out.n == 0) throw Error("EmptyMatrix", "confusion matrix is empty");

  const Index K = m.rows();
  const std::int64_t trace = m.diagonal().sum();
  out.accuracy = ratio(trace, out.n);

  std::int64_t tp_all = 0, fp_all = 0, fn_all = 0;
  double f1_sum = 0.0;
  out.per_class.resize(static_cast<std::size_t>(K));
  for (Index k = 0; k < K; ++k) {
    const std::int64_t tp = m(k, k);
    const std::int64_t col = m.col(k).sum();
    const std::int64_t row = m.row(k).sum();
    ClassMetrics& c = out.per_class[static_cast<std::size_t>(k)];
    c.precision = ratio(tp, col);
    c.recall = ratio(tp, row);
    c.f1 = (c.precision + c.recall) > 0.0
               ? 2.0 * c.precision * c.recall / (c.precision + c.recall)
               : 0.0;
    c.support = row;
    f1_sum += c.f1;
    tp_all += tp;
    fp_all += col - tp;
    fn_all += row - tp;
  }
  out.micro_f1_all = pooled_f1(tp_all, fp_all, fn_all);
  out.macro_f1 = f1_sum / static_cast<double>(K);

  std::int64_t tp_rel = 0, fp_rel = 0, fn_rel = 0;
  for (Label k : relevant) {
    if (k < 0 || k >= K) throw Error("LabelOutOfRange", "relevant class");
    tp_rel += m(k, k);
    fp_rel += m.col(k).sum() - m(k, k);
    fn_rel += m.row(k).sum() - m(k, k);
  }
  out.micro_f1_relevant = pooled_f1(tp_rel, fp_rel, fn_rel);
  return out;
}

CvReport cross_validate(Framework framework, FeatureCategory category,
                        const Matrix& X, std::span<const Label> y,
                        const GbdtParams& params, int num_folds,
                        std::uint64_t seed, int num_classes) {
  const Matrix projected = project_category(X, category);
  FoldFeatureFn select = [&](std::span<const Index> train,
                             std::span<const Index> test) {
    return std::pair<Matrix, Matrix>(
        projected(std::vector<Index>(train.begin(), train.end()), Eigen::all),
        projected(std::vector<Index>(test.begin(), test.end()), Eigen::all));
  };
  // The provider already projects; pass kAll so it is not applied twice, then
  // restore the category tag for reporting.
  CvReport report = cross_validate(framework, FeatureCategory::kAll, select, y,
                                   params, num_folds, seed, num_classes);
  report.category = category;
  return report;
}

CvReport cross_validate(Framework framework, FeatureCategory category,
                        const FoldFeatureFn& features, std::span<const Label> y,
                        const GbdtParams& params, int num_folds,
                        std::uint64_t seed, int num_classes) {
  const FoldAssignment folds =
      stratified_folds(y, num_folds, stage_seed(seed, "folds"));

  CvReport report;
  report.framework = framework;
  report.category = category;
  report.num_folds = num_folds;
  report.seed = seed;
  report.learners_per_model = learner_count(framework, num_classes);

  CountMatrix total = CountMatrix::Zero(num_classes, num_classes);
  for (int f = 0; f < num_folds; ++f) {
    const std::vector<Index> train = folds.train_rows(f);
    const std::vector<Index> test = folds.test_rows(f);
    auto [X_train, X_test] = features(train, test);
    X_train = project_category(X_train, category);
    X_test = project_category(X_test, category);

    Labels y_train;
    Labels y_test;
    for (Index i : train) y_train.push_back(y[static_cast<std::size_t>(i)]);
    for (Index i : test) y_test.push_back(y[static_cast<std::size_t>(i)]);

    const MulticlassModel model = train_framework(
        framework, X_train, y_train, params,
        stage_seed(seed, "train") + static_cast<unsigned>(f), num_classes,
        category);
    Labels y_pred;
    for (const Prediction& p : predict_batch(model, X_test)) {
      y_pred.push_back(p.label);
    }
    const CountMatrix cm = confusion_matrix(y_test, y_pred, num_classes);
    total += cm;
    report.per_fold.push_back(compute_metrics(cm));
  }
  report.aggregate = compute_metrics(total);

  double sum = 0.0;
  for (const Metrics& m : report.per_fold) sum += m.accuracy;
  report.mean_fold_accuracy = sum / num_folds;
  double ss = 0.0;
  for (const Metrics& m : report.per_fold) {
    ss += (m.accuracy - report.mean_fold_accuracy) *
          (m.accuracy - report.mean_fold_accuracy);
  }
  report.std_fold_accuracy = num_folds > 1 ? std::sqrt(ss / (num_folds - 1)) : 0.0;
  return report;
}

namespace {

std::string_view category_label(FeatureCategory c) {
  switch (c) {
    case FeatureCategory::kSocial:
      return "Social (S.)";
    case FeatureCategory::kActivity:
      return "Activity (A.)";
    case FeatureCategory::kRepresentation:
      return "Representation (R.)";
    case FeatureCategory::kAll:
      return "S. + A. + R.";
  }
  return "";
}

std::string_view framework_label(Framework f) {
  switch (f) {
    case Framework::kSingle:
      return "Single Learner";
    case Framework::kOva:
      return "One-vs-All Binarization";
    case Framework::kOvo:
      return "One-vs-One Binarization";
  }
  return "";
}

std::string pad(std::string_view s, std::size_t width) {
  std::string out(s);
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

}  // namespace

std::string format_results_table(std::span<const CvReport> reports) {
  std::ostringstream out;
  out << pad("Experiment", 12) << pad("Feature Category", 22)
      << pad("Accuracy", 10) << pad("F1-score", 10) << pad("Micro-F1(all)", 15)
      << "Macro-F1\n";
  std::optional<Framework> current;
  int baseline = 0;
  for (const CvReport& r : reports) {
    if (!current || *current != r.framework) {
      out << framework_label(r.framework) << '\n';
      current = r.framework;
      baseline = 0;
    }
    const std::string experiment =
        r.category == FeatureCategory::kAll
            ? "Proposed"
            : "baseline-" + std::to_string(++baseline);
    out << pad(experiment, 12) << pad(category_label(r.category), 22)
        << pad(format_fixed(100.0 * r.aggregate.accuracy, 1), 10)
        << pad(format_fixed(100.0 * r.aggregate.micro_f1_relevant, 1), 10)
        << pad(format_fixed(100.0 * r.aggregate.micro_f1_all, 1), 15)
        << format_fixed(100.0 * r.aggregate.macro_f1, 1) << '\n';
  }
  return out.str();
}

}  // namespace idclass
