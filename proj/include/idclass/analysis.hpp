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

#ifndef IDCLASS_ANALYSIS_HPP_
#define IDCLASS_ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "idclass/ingestion.hpp"
#include "idclass/types.hpp"

namespace idclass {

// ---- Two-sample Kolmogorov-Smirnov ----

struct KSResult {
  double d_statistic = 0.0;
  double p_value = 1.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

/// sup_x |ECDF_a(x) - ECDF_b(x)| by a merged sweep over the sorted samples.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic Kolmogorov survival function Q(lambda) with
/// lambda = sqrt(n1 n2 / (n1 + n2)) * d, clamped to [0, 1].
double ks_p_value(double d, std::size_t n1, std::size_t n2);

/// Throws "EmptySample".
KSResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

// ---- Chi-square feature ranking ----

/// Equal-frequency bin index per value. Cut points are the order statistics
/// at ranks floor(j n / bins), j = 1..bins-1; duplicate cut points merge, and
/// a value's bin is the number of distinct cut points <= it. Depends only on
/// ranks.
std::vector<int> quantile_bins(std::span<const double> values, int bins);

/// Pearson statistic over cells with a positive expected count.
double chi_square_statistic(const CountMatrix& contingency);

struct FeatureScore {
  std::string name;
  double chi2 = 0.0;
  int dof = 0;
  int effective_bins = 0;
  bool degenerate = false;  // constant feature
};

struct FeatureRanking {
  int bins = 10;
  std::vector<FeatureScore> features;  // by chi2 descending, ties stable
};

/// Throws "TooFewSamples" (rows < bins) or "SingleClass" (< 2 classes).
FeatureRanking chi_square_rank(const Matrix& X, std::span<const Label> y,
                               std::span<const std::string> names,
                               int bins = 10);

// ---- Distributions and content practice ----

/// Percentage per class (0..K-1), summing to 100. Throws "EmptyInput".
std::vector<double> label_distribution(std::span<const Label> labels,
                                       int num_classes = kNumIdentityClasses);

struct ClassPractice {
  std::int64_t tweets = 0;
  std::optional<double> url_share;
  std::optional<double> mention_share;
  std::int64_t users = 0;
  std::optional<double> mean_friends;
  std::optional<double> mean_followers;
};

struct PracticeReport {
  std::vector<ClassPractice> per_class;
  std::vector<double> user_distribution;  // percent of distinct mapped users
  std::int64_t unmapped_tweets = 0;
};

bool contains_url(std::string_view text);
bool contains_mention(std::string_view text);

PracticeReport content_practice_report(
    std::span<const TweetRecord> tweets,
    const std::unordered_map<std::string, Label>& class_of,
    int num_classes = kNumIdentityClasses);

// ---- Metadata distribution tests ----

/// Profile fields compared between identity classes.
inline constexpr std::string_view kKsFields[] = {
    "followers_count", "friends_count", "listed_count", "statuses_count",
    "favourites_count"};

double profile_field(const UserProfile& p, std::string_view field);

struct KsRow {
  std::string field;
  Label class_a = 0;
  Label class_b = 0;
  KSResult result;
  bool significant = false;
};

/// K-S test for every field and every class pair with users on both sides.
std::vector<KsRow> metadata_ks_report(std::span<const UserProfile> profiles,
                                      std::span<const Label> labels,
                                      int num_classes = kNumIdentityClasses,
                                      double alpha = 0.01);

struct EcdfPoint {
  std::string field;
  Label label = 0;
  double value = 0.0;
  double cumulative = 0.0;
};

/// Step points of each class's ECDF (one per distinct value) for plotting.
std::vector<EcdfPoint> metadata_ecdf(std::span<const UserProfile> profiles,
                                     std::span<const Label> labels,
                                     int num_classes = kNumIdentityClasses);

}  // namespace idclass

#endif  // IDCLASS_ANALYSIS_HPP_
