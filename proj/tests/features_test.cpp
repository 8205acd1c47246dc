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

#include "idclass/features.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

namespace idclass {
namespace {

constexpr std::int64_t kDay = 86400;

UserProfile profile_with_age(std::int64_t seconds) {
  UserProfile p;
  p.user_id = "u";
  p.created_at = 1'300'000'000;
  p.observed_at = p.created_at + seconds;
  return p;
}

TEST(RatioFeatureTest, SociabilityExamples) {
  EXPECT_NEAR(sociability(0, 0), 0.693147, 1e-6);
  EXPECT_NEAR(sociability(99, 0), 4.615121, 1e-6);
  EXPECT_NEAR(sociability(0, 99), 0.009950, 1e-6);
}

TEST(RatioFeatureTest, FavorabilityExamples) {
  EXPECT_NEAR(favorability(0, 0), 0.693147, 1e-6);
  EXPECT_NEAR(favorability(199, 99), 1.098612, 1e-6);
  EXPECT_NEAR(favorability(0, 999), 0.0009995, 1e-7);
}

TEST(RatioFeatureTest, SurvivabilityExamples) {
  EXPECT_EQ(survivability(profile_with_age(0)), 0.0);
  EXPECT_NEAR(survivability(profile_with_age(364 * kDay)), 5.899897, 1e-6);
  EXPECT_EQ(survivability(profile_with_age(86399)), 0.0);
  EXPECT_EQ(account_age_days(profile_with_age(2 * kDay - 1)), 1u);
}

TEST(RatioFeatureTest, ActivenessExamples) {
  EXPECT_NEAR(activeness(0, profile_with_age(0)), 0.693147, 1e-6);
  EXPECT_NEAR(activeness(999, profile_with_age(99 * kDay)), 2.397895, 1e-6);
  EXPECT_NEAR(activeness(0, profile_with_age(999 * kDay)), 0.0009995, 1e-7);
}

TEST(RatioFeatureTest, NegativeAgeThrows) {
  const UserProfile p = profile_with_age(-1);
  try {
    survivability(p);
    FAIL() << "expected NegativeAge";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), "NegativeAge");
  }
  EXPECT_THROW(activeness(1, p), Error);
  EXPECT_THROW(extract_features(p, 0.0), Error);
}

TEST(RatioFeatureTest, MonotoneAndBounded) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<std::uint64_t> count(0, 1'000'000);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t a = count(gen), b = count(gen);
    EXPECT_LT(sociability(a, b), sociability(a + 1, b));
    EXPECT_GT(sociability(a, b), sociability(a, b + 1));
    EXPECT_LT(favorability(a, b), favorability(a + 1, b));
    EXPECT_GT(sociability(a, b), 0.0);
    EXPECT_LE(sociability(a, b), std::log(2.0 + static_cast<double>(a)) + 1e-12);
  }
}

TEST(RatioFeatureTest, FiniteAtExtremeCounts) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t a : {std::uint64_t{0}, kMax}) {
    for (std::uint64_t b : {std::uint64_t{0}, kMax}) {
      EXPECT_TRUE(std::isfinite(sociability(a, b)));
      EXPECT_TRUE(std::isfinite(favorability(a, b)));
      EXPECT_TRUE(std::isfinite(activeness(a, profile_with_age(b % 1000 * kDay))));
    }
  }
}

TEST(InformalityTest, Examples) {
  EXPECT_EQ(informality_counts("Founder @acme #ai :) since 2010"),
            (InformalityCounts{1, 1, 1, 1}));
  EXPECT_EQ(informality_counts(""), (InformalityCounts{}));
  EXPECT_EQ(informality_counts("Est. 1881–1945 #history #maps"),
            (InformalityCounts{2, 0, 0, 2}));
}

TEST(InformalityTest, EmoticonLexiconAndEmoji) {
  EXPECT_EQ(informality_counts(":-) :) ;-) <3 xD XD :P :p :/ :'( :( :-( :D ;)").emoticons, 14);
  // ":-)" counts once, not also as ":)".
  EXPECT_EQ(informality_counts(":-)").emoticons, 1);
  EXPECT_EQ(informality_counts("see https://example.org").emoticons, 0);
  EXPECT_EQ(informality_counts("rain \xE2\x98\x94 and \xF0\x9F\x8C\x8A").emoticons, 2);
  EXPECT_EQ(informality_counts("# @ lone sigils").hashtags, 0);
  EXPECT_EQ(informality_counts("# @ lone sigils").mentions, 0);
}

TEST(ExtractFeaturesTest, AllZeroProfile) {
  const UserProfile p = profile_with_age(0);
  const Vector v = extract_features(p, 0.0);
  const double ln2 = std::log(2.0);
  Vector expected(kNumFeatures);
  expected << 0, 0, ln2, 0, 0, 0, ln2, 0, ln2, 0, 0, 0, 0, 0, 0;
  ASSERT_EQ(v.size(), kNumFeatures);
  EXPECT_TRUE(v.isApprox(expected, 1e-15)) << v.transpose();
}

TEST(ExtractFeaturesTest, TableOneAffiliatedBio) {
  UserProfile p = profile_with_age(10 * kDay);
  p.bio = "CrisisMapper. Board Member of the Standby Task Force. "
          "Information Mgmt at ReliefWeb (UN OCHA)";
  p.profile_url_present = true;
  const Vector v = extract_features(p, -1.5);
  EXPECT_EQ(v(9), 0.0);   // n_hashtags
  EXPECT_EQ(v(10), 0.0);  // n_mentions
  EXPECT_EQ(v(13), 1.0);  // url_present
  EXPECT_EQ(v(14), -1.5);
}

TEST(ExtractFeaturesTest, PureAndRejectsNonFiniteScore) {
  UserProfile p = profile_with_age(400 * kDay);
  p.friends_count = 12;
  p.followers_count = 3400;
  p.bio = "#ai #ml @lab 2024";
  const Vector a = extract_features(p, -0.25);
  const Vector b = extract_features(p, -0.25);
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * kNumFeatures), 0);
  EXPECT_THROW(extract_features(p, std::nan("")), Error);
}

TEST(SchemaTest, CategoriesAndProjection) {
  EXPECT_EQ(category_columns(FeatureCategory::kSocial), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(category_columns(FeatureCategory::kActivity).size(), 6u);
  EXPECT_EQ(category_columns(FeatureCategory::kRepresentation).size(), 6u);
  EXPECT_EQ(category_columns(FeatureCategory::kAll).size(), 15u);
  EXPECT_EQ(category_feature_names(FeatureCategory::kSocial),
            (std::vector<std::string>{"friends_count", "followers_count", "sociability"}));

  const Vector v = Vector::LinSpaced(kNumFeatures, 0, kNumFeatures - 1);
  EXPECT_EQ(project_category(v, FeatureCategory::kAll), v);
  const Vector s = project_category(v, FeatureCategory::kSocial);
  EXPECT_EQ(s, (Vector(3) << 0, 1, 2).finished());
  EXPECT_EQ(project_category(v, FeatureCategory::kActivity),
            (Vector(6) << 3, 4, 5, 6, 7, 8).finished());

  Matrix m(2, kNumFeatures);
  m.row(0) = v.transpose();
  m.row(1) = -v.transpose();
  const Matrix r = project_category(m, FeatureCategory::kRepresentation);
  EXPECT_EQ(r.cols(), 6);
  EXPECT_EQ(r(1, 0), -9.0);
}

TEST(SchemaTest, CategoryNamesRoundTrip) {
  for (auto c : {FeatureCategory::kSocial, FeatureCategory::kActivity,
                 FeatureCategory::kRepresentation, FeatureCategory::kAll}) {
    EXPECT_EQ(parse_feature_category(to_string(c)), c);
  }
  EXPECT_FALSE(parse_feature_category("bogus").has_value());
}

TEST(FeatureCsvTest, HeaderAndRows) {
  Matrix m = Matrix::Zero(1, kNumFeatures);
  m(0, 2) = 0.5;
  std::ostringstream out;
  const std::vector<std::string> ids = {"u1"};
  write_feature_csv(out, ids, m);
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, s.find('\n')),
            "user_id,friends_count,followers_count,sociability,statuses_count,"
            "favourites_count,listed_count,favorability,survivability,activeness,"
            "n_hashtags,n_mentions,n_emoticons,n_numerics,url_present,embedding_score");
  EXPECT_NE(s.find("u1,0,0,0.5,"), std::string::npos);
}

}  // namespace
}  // namespace idclass
