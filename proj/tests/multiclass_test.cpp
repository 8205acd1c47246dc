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

#include <cmath>

#include <gtest/gtest.h>

#include "idclass/math.hpp"
#include "idclass/random.hpp"

namespace idclass {
namespace {

// Four well-separated 2-D clusters; class k sits at (3k, -3k).
void separable4(int per_class, Matrix& X, Labels& y, std::uint64_t seed = 4) {
  Rng rng(seed);
  X.resize(4 * per_class, 2);
  y.clear();
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < per_class; ++i) {
      const Index r = static_cast<Index>(y.size());
      X(r, 0) = 3.0 * k + rng.uniform(-0.5, 0.5);
      X(r, 1) = -3.0 * k + rng.uniform(-0.5, 0.5);
      y.push_back(k);
    }
  }
}

// A prior-only binary learner whose positive probability is exactly p.
BoostedModel constant_learner(double p) {
  BoostedModel m;
  m.objective = Objective::kBinaryLogistic;
  m.num_features = 1;
  m.base_score = Vector::Constant(1, logit(p));
  return m;
}

MulticlassModel hand_built(Framework f, const std::vector<double>& probs) {
  MulticlassModel m;
  m.framework = f;
  m.num_classes = 4;
  m.class_names = {"organization", "organization_affiliated", "non_affiliated", "none"};
  m.feature_names = {"x"};
  m.pairs = f == Framework::kOvo ? class_pairs(4) : std::vector<std::pair<Label, Label>>{};
  for (double p : probs) m.learners.push_back(constant_learner(p));
  return m;
}

TEST(FrameworkTest, LearnerCountLaw) {
  EXPECT_EQ(learner_count(Framework::kSingle, 4), 1);
  EXPECT_EQ(learner_count(Framework::kOva, 4), 4);
  EXPECT_EQ(learner_count(Framework::kOvo, 4), 6);
  EXPECT_EQ(class_pairs(4).size(), 6u);
  EXPECT_EQ(class_pairs(4).front(), (std::pair<Label, Label>{0, 1}));
  EXPECT_EQ(class_pairs(4).back(), (std::pair<Label, Label>{2, 3}));

  Matrix X;
  Labels y;
  separable4(10, X, y);
  GbdtParams p;
  p.n_estimators = 5;
  for (auto f : {Framework::kSingle, Framework::kOva, Framework::kOvo}) {
    const MulticlassModel m = train_framework(f, X, y, p, 1);
    EXPECT_EQ(static_cast<int>(m.learners.size()), learner_count(f, 4));
  }
}

TEST(FrameworkTest, NamesRoundTrip) {
  for (auto f : {Framework::kSingle, Framework::kOva, Framework::kOvo}) {
    EXPECT_EQ(parse_framework(to_string(f)), f);
  }
  EXPECT_FALSE(parse_framework("ecoc").has_value());
}

TEST(FrameworkTest, OvoLearnerSeesOnlyItsPair) {
  // Class sizes 2, 4, 6, 8. A prior-only learner's base score reveals the
  // class balance of the rows it was fit on.
  Labels y;
  for (int k = 0; k < 4; ++k) y.insert(y.end(), 2 * (k + 1), k);
  Matrix X = Matrix::Zero(static_cast<Index>(y.size()), 1);
  GbdtParams p;
  p.n_estimators = 0;
  const MulticlassModel m = train_framework(Framework::kOvo, X, y, p, 1);
  ASSERT_EQ(m.pairs.size(), 6u);
  for (std::size_t i = 0; i < m.pairs.size(); ++i) {
    const auto [a, b] = m.pairs[i];
    const double na = 2.0 * (a + 1), nb = 2.0 * (b + 1);
    EXPECT_NEAR(m.learners[i].base_score(0), std::log(na / nb), 1e-12);
  }
}

TEST(FrameworkTest, MissingClassThrows) {
  Matrix X = Matrix::Zero(6, 1);
  try {
    train_framework(Framework::kOva, X, Labels{0, 1, 2, 0, 1, 2}, GbdtParams{}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), "MissingClass");
  }
}

TEST(PredictTest, OvaArgmax) {
  const MulticlassModel m = hand_built(Framework::kOva, {0.1, 0.7, 0.2, 0.3});
  const Prediction p = predict(m, Vector::Zero(1));
  EXPECT_EQ(p.label, 1);
  EXPECT_NEAR(p.scores(1), 0.7, 1e-15);
}

TEST(PredictTest, OvoRoundRobinVotes) {
  // Pairs (0,1) (0,2) (0,3) (1,2) (1,3) (2,3): the lower class wins every one.
  const MulticlassModel m = hand_built(Framework::kOvo, {0.9, 0.9, 0.9, 0.9, 0.9, 0.9});
  const Prediction p = predict(m, Vector::Zero(1));
  EXPECT_EQ(p.label, 0);
  EXPECT_EQ(p.scores, (Vector(4) << 3.0 / 6, 2.0 / 6, 1.0 / 6, 0.0).finished());
}

TEST(PredictTest, OvoVoteTieUsesProbabilityMass) {
  const auto pairs = class_pairs(4);
  // Votes (1, 2, 2, 1); masses of classes 1 and 2 both 1.75.
  std::vector<double> probs = {0.25, 0.25, 0.75, 0.25, 0.75, 0.25};
  EXPECT_EQ(aggregate_ovo(probs, pairs, 4).label, 1);
  probs[1] = 0.125;  // class 2 mass 1.875
  EXPECT_EQ(aggregate_ovo(probs, pairs, 4).label, 2);
  probs[1] = 0.25;
  probs[4] = 0.875;  // class 1 mass 1.875
  EXPECT_EQ(aggregate_ovo(probs, pairs, 4).label, 1);
}

TEST(PredictTest, OvoExactTieFallsBackToClassOrder) {
  // Votes (2, 2, 1, 1); masses of classes 0 and 1 both 1.875 exactly.
  const std::vector<double> probs = {0.75, 0.75, 0.375, 0.8125, 0.8125, 0.5};
  const Prediction p = aggregate_ovo(probs, class_pairs(4), 4);
  EXPECT_EQ(p.label, 0);
  EXPECT_EQ(p.scores(0), p.scores(1));
  EXPECT_DOUBLE_EQ(p.scores.sum() * 6.0, 6.0);
}

TEST(PredictTest, OvaTieTakesLowerClass) {
  const MulticlassModel m = hand_built(Framework::kOva, {0.2, 0.6, 0.6, 0.1});
  EXPECT_EQ(predict(m, Vector::Zero(1)).label, 1);
  EXPECT_EQ(argmax((Vector(3) << 1.0, 1.0, 1.0).finished()), 0);
}

TEST(PredictTest, OvoVotesAlwaysSumToPairCount) {
  Rng rng(77);
  const auto pairs = class_pairs(4);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> probs(6);
    for (double& p : probs) p = rng.uniform();
    const Prediction pr = aggregate_ovo(probs, pairs, 4);
    EXPECT_DOUBLE_EQ((pr.scores * 6.0).sum(), 6.0);
  }
}

TEST(PredictTest, SchemaMismatch) {
  const MulticlassModel m = hand_built(Framework::kOva, {0.1, 0.2, 0.3, 0.4});
  EXPECT_THROW(predict(m, Vector::Zero(3)), Error);
}

TEST(PredictTest, SeparableTrainingAccuracyAllFrameworks) {
  Matrix X;
  Labels y;
  separable4(40, X, y);
  for (auto f : {Framework::kSingle, Framework::kOva, Framework::kOvo}) {
    const MulticlassModel m = train_framework(f, X, y, GbdtParams{}, 3);
    const auto preds = predict_batch(m, X);
    int correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) correct += preds[i].label == y[i];
    EXPECT_GE(correct, 159) << to_string(f);
    // Repeated predictions agree.
    EXPECT_EQ(predict(m, X.row(5).transpose()).label, preds[5].label);
    if (f == Framework::kSingle) {
      EXPECT_NEAR(preds[0].scores.sum(), 1.0, 1e-12);
    }
  }
}

TEST(PredictBatchTest, ElementwiseContract) {
  Matrix X;
  Labels y;
  separable4(8, X, y);
  GbdtParams p;
  p.n_estimators = 10;
  const MulticlassModel m = train_framework(Framework::kOvo, X, y, p, 3);
  EXPECT_TRUE(predict_batch(m, Matrix(0, 2)).empty());
  const auto one = predict_batch(m, X.topRows(1));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].scores, predict(m, X.row(0).transpose()).scores);

  Matrix reversed = X.colwise().reverse();
  const auto fwd = predict_batch(m, X);
  const auto rev = predict_batch(m, reversed);
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    EXPECT_EQ(fwd[i].label, rev[fwd.size() - 1 - i].label);
  }
}

}  // namespace
}  // namespace idclass
