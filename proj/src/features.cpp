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

#include <algorithm>
#include <ostream>

#include "idclass/io.hpp"
#include "idclass/text.hpp"

namespace idclass {

std::string_view to_string(FeatureCategory c) {
  switch (c) {
    case FeatureCategory::kSocial:
      return "social";
    case FeatureCategory::kActivity:
      return "activity";
    case FeatureCategory::kRepresentation:
      return "representation";
    case FeatureCategory::kAll:
      return "all";
  }
  return "all";
}

std::optional<FeatureCategory> parse_feature_category(std::string_view s) {
  for (auto c : {FeatureCategory::kSocial, FeatureCategory::kActivity,
                 FeatureCategory::kRepresentation, FeatureCategory::kAll}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::vector<int> category_columns(FeatureCategory category) {
  std::vector<int> cols;
  for (int i = 0; i < kNumFeatures; ++i) {
    if (category == FeatureCategory::kAll ||
        kFeatureSchema[i].category == category) {
      cols.push_back(i);
    }
  }
  return cols;
}

std::vector<std::string> category_feature_names(FeatureCategory category) {
  std::vector<std::string> names;
  for (int i : category_columns(category)) {
    names.emplace_back(kFeatureSchema[i].name);
  }
  return names;
}

std::uint64_t account_age_days(const UserProfile& profile) {
  if (profile.observed_at < profile.created_at) {
    throw Error("NegativeAge", "user " + profile.user_id +
                                   " observed before account creation");
  }
  return static_cast<std::uint64_t>(profile.observed_at - profile.created_at) /
         86400u;
}

double survivability(const UserProfile& profile) {
  return std::log1p(static_cast<double>(account_age_days(profile)));
}

double activeness(std::uint64_t statuses_count, const UserProfile& profile) {
  return log_smoothed_ratio<double>(statuses_count, account_age_days(profile));
}

namespace {

constexpr std::string_view kEmoticons[] = {
    ":-)", ":-(", ";-)", ":'(", ":)", ":(", ":D", ";)",
    ":P",  ":p",  ":/",  "<3",  "xD", "XD",
};

bool is_emoji_codepoint(char32_t cp) {
  return (cp >= 0x2600 && cp <= 0x27BF) || (cp >= 0x1F300 && cp <= 0x1FAFF);
}

bool followed_by_alnum(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return false;
  return text::is_alnum(text::decode_utf8(s, pos));
}

}  // namespace

std::span<const std::string_view> emoticon_lexicon() { return kEmoticons; }

InformalityCounts informality_counts(std::string_view bio) {
  InformalityCounts counts;
  std::size_t pos = 0;
  bool in_digits = false;
  while (pos < bio.size()) {
    const char c = bio[pos];
    if (c >= '0' && c <= '9') {
      if (!in_digits) ++counts.numerics;
      in_digits = true;
      ++pos;
      continue;
    }
    in_digits = false;

    const std::string_view rest = bio.substr(pos);
    auto emoticon = std::find_if(
        std::begin(kEmoticons), std::end(kEmoticons),
        [&](std::string_view e) { return rest.starts_with(e); });
    // ":/" directly followed by '/' is a URL scheme separator.
    if (emoticon != std::end(kEmoticons) &&
        !(*emoticon == ":/" && rest.size() > 2 && rest[2] == '/')) {
      ++counts.emoticons;
      pos += emoticon->size();
      continue;
    }

    if (c == '#' || c == '@') {
      if (followed_by_alnum(bio, pos + 1)) {
        ++(c == '#' ? counts.hashtags : counts.mentions);
      }
      ++pos;
      continue;
    }

    const char32_t cp = text::decode_utf8(bio, pos);
    if (is_emoji_codepoint(cp)) ++counts.emoticons;
  }
  return counts;
}

Vector extract_features(const UserProfile& p, double embedding_score) {
  if (!std::isfinite(embedding_score)) {
    throw Error("NonFiniteFeature",
                "embedding score for user " + p.user_id + " is not finite");
  }
  const std::uint64_t days = account_age_days(p);
  const InformalityCounts informal = informality_counts(p.bio);

  Vector v(kNumFeatures);
  v << static_cast<double>(p.friends_count),
      static_cast<double>(p.followers_count),
      sociability(p.friends_count, p.followers_count),
      static_cast<double>(p.statuses_count),
      static_cast<double>(p.favourites_count),
      static_cast<double>(p.listed_count),
      favorability(p.favourites_count, p.statuses_count),
      std::log1p(static_cast<double>(days)),
      log_smoothed_ratio<double>(p.statuses_count, days), informal.hashtags,
      informal.mentions, informal.emoticons, informal.numerics,
      p.profile_url_present ? 1.0 : 0.0, embedding_score;
  return v;
}

Vector project_category(const Vector& v, FeatureCategory category) {
  if (category == FeatureCategory::kAll) return v;
  return v(category_columns(category));
}

Matrix project_category(const Matrix& rows, FeatureCategory category) {
  if (category == FeatureCategory::kAll) return rows;
  return rows(Eigen::all, category_columns(category));
}

void write_feature_csv(std::ostream& out, std::span<const std::string> user_ids,
                       const Matrix& features) {
  out << "user_id";
  for (const auto& spec : kFeatureSchema) out << ',' << spec.name;
  out << '\n';
  for (Index r = 0; r < features.rows(); ++r) {
    out << csv_escape(user_ids[static_cast<std::size_t>(r)]);
    for (Index c = 0; c < features.cols(); ++c) {
      out << ',' << format_double(features(r, c));
    }
    out << '\n';
  }
}

}  // namespace idclass
