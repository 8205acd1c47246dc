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

#ifndef IDCLASS_FEATURES_HPP_
#define IDCLASS_FEATURES_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idclass/ingestion.hpp"
#include "idclass/types.hpp"

namespace idclass {

enum class FeatureCategory { kSocial, kActivity, kRepresentation, kAll };

std::string_view to_string(FeatureCategory c);
std::optional<FeatureCategory> parse_feature_category(std::string_view s);

struct FeatureSpec {
  std::string_view name;
  FeatureCategory category;
};

inline constexpr int kNumFeatures = 15;

/// Fixed column layout shared by training and prediction.
inline constexpr std::array<FeatureSpec, kNumFeatures> kFeatureSchema = {{
    {"friends_count", FeatureCategory::kSocial},
    {"followers_count", FeatureCategory::kSocial},
    {"sociability", FeatureCategory::kSocial},
    {"statuses_count", FeatureCategory::kActivity},
    {"favourites_count", FeatureCategory::kActivity},
    {"listed_count", FeatureCategory::kActivity},
    {"favorability", FeatureCategory::kActivity},
    {"survivability", FeatureCategory::kActivity},
    {"activeness", FeatureCategory::kActivity},
    {"n_hashtags", FeatureCategory::kRepresentation},
    {"n_mentions", FeatureCategory::kRepresentation},
    {"n_emoticons", FeatureCategory::kRepresentation},
    {"n_numerics", FeatureCategory::kRepresentation},
    {"url_present", FeatureCategory::kRepresentation},
    {"embedding_score", FeatureCategory::kRepresentation},
}};

/// Schema column indices belonging to `category` (all of them for kAll).
std::vector<int> category_columns(FeatureCategory category);
std::vector<std::string> category_feature_names(FeatureCategory category);

// The four derived features share one shape: log(1 + (1 + a) / (1 + b)).
// Counts are widened to Scalar before the +1 so every uint64 input stays
// finite.
template <typename Scalar = double>
Scalar log_smoothed_ratio(std::uint64_t numerator, std::uint64_t denominator) {
  const Scalar ratio = (Scalar(1) + static_cast<Scalar>(numerator)) /
                       (Scalar(1) + static_cast<Scalar>(denominator));
  return std::log1p(ratio);
}

template <typename Scalar = double>
Scalar sociability(std::uint64_t friends_count, std::uint64_t followers_count) {
  return log_smoothed_ratio<Scalar>(friends_count, followers_count);
}

template <typename Scalar = double>
Scalar favorability(std::uint64_t favourites_count, std::uint64_t tweet_count) {
  return log_smoothed_ratio<Scalar>(favourites_count, tweet_count);
}

/// Whole days between account creation and observation. Throws NegativeAge.
std::uint64_t account_age_days(const UserProfile& profile);

double survivability(const UserProfile& profile);
double activeness(std::uint64_t statuses_count, const UserProfile& profile);

struct InformalityCounts {
  int hashtags = 0;
  int mentions = 0;
  int emoticons = 0;
  int numerics = 0;

  bool operator==(const InformalityCounts&) const = default;
};

/// Counts '#'/'@' followed by a letter or digit, ASCII emoticons from a fixed
/// lexicon plus emoji-block code points, and maximal ASCII digit runs.
InformalityCounts informality_counts(std::string_view bio);

/// Emoticon lexicon, longest entries first.
std::span<const std::string_view> emoticon_lexicon();

/// The 15-column vector for one user. Throws NegativeAge, or Error
/// "NonFiniteFeature" if `embedding_score` is not finite.
Vector extract_features(const UserProfile& profile, double embedding_score);

/// Restricts the columns of a vector (or of every row of a matrix) to one
/// category, preserving schema order.
Vector project_category(const Vector& v, FeatureCategory category);
Matrix project_category(const Matrix& rows, FeatureCategory category);

/// CSV: header "user_id,<schema names>", one row per user.
void write_feature_csv(std::ostream& out, std::span<const std::string> user_ids,
                       const Matrix& features);

}  // namespace idclass

#endif  // IDCLASS_FEATURES_HPP_
