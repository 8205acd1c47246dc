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

#include "idclass/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "idclass/io.hpp"
#include "idclass/random.hpp"

namespace idclass {

SynthSpec default_synth_spec() {
  SynthSpec spec;
  spec.keywords = {"louisiana flood", "#louisianaflood", "#laflood",
                   "baton rouge flooding", "flood relief"};

  ClassSpec org;
  org.proportion = 0.131;
  org.friends = {6.0, 1.0};
  org.followers = {8.5, 1.3};
  org.statuses = {8.5, 1.1};
  org.favourites = {5.0, 1.3};
  org.listed = {4.5, 1.1};
  org.age_days = {7.4, 0.5};
  org.bio_phrases = {"official twitter account", "disaster relief agency",
                     "emergency management office", "public safety information",
                     "humanitarian aid organization", "news and updates",
                     "red cross chapter", "national weather service",
                     "county sheriff office", "nonprofit food bank",
                     "volunteer fire department", "serving the community"};
  org.max_bio_phrases = 2;
  org.bio_hashtag_rate = 0.35;
  org.bio_mention_rate = 0.10;
  org.bio_emoticon_rate = 0.01;
  org.bio_numeric_rate = 0.15;
  org.profile_url_rate = 0.85;
  org.tweet_url_rate = 0.75;
  org.tweet_mention_rate = 0.25;

  ClassSpec aff;
  aff.proportion = 0.077;
  aff.friends = {6.8, 0.9};
  aff.followers = {6.8, 1.0};
  aff.statuses = {7.8, 1.0};
  aff.favourites = {7.2, 1.0};
  aff.listed = {3.2, 1.0};
  aff.age_days = {7.2, 0.6};
  aff.bio_phrases = {"working at red cross", "volunteer coordinator",
                     "board member", "information management officer",
                     "program officer at unicef", "views are my own",
                     "communications director", "field responder",
                     "crisis mapper", "digital humanitarian",
                     "emergency manager", "relief worker"};
  aff.max_bio_phrases = 3;
  aff.bio_hashtag_rate = 0.20;
  aff.bio_mention_rate = 0.80;
  aff.bio_emoticon_rate = 0.05;
  aff.bio_numeric_rate = 0.15;
  aff.profile_url_rate = 0.45;
  aff.tweet_url_rate = 0.70;
  aff.tweet_mention_rate = 0.55;

  ClassSpec non;
  non.proportion = 0.682;
  non.friends = {5.6, 1.1};
  non.followers = {5.2, 1.2};
  non.statuses = {7.2, 1.3};
  non.favourites = {7.6, 1.3};
  non.listed = {0.8, 1.0};
  non.age_days = {6.9, 0.8};
  non.bio_phrases = {"love music", "coffee addict", "mom of two",
                     "just living life", "football fan", "dreamer",
                     "lsu tigers", "foodie", "traveler", "college student",
                     "dog lover", "jesus first", "netflix", "southern girl",
                     "gamer", "cajun cooking", "nurse", "teacher",
                     "saints fan", "photography", "proud dad", "yoga",
                     "country music", "fishing", "beach life", "sarcasm"};
  non.max_bio_phrases = 3;
  non.empty_bio_rate = 0.10;
  non.bio_hashtag_rate = 0.25;
  non.bio_mention_rate = 0.10;
  non.bio_emoticon_rate = 0.45;
  non.bio_numeric_rate = 0.20;
  non.profile_url_rate = 0.15;
  non.tweet_url_rate = 0.40;
  non.tweet_mention_rate = 0.20;

  ClassSpec none;
  none.proportion = 0.110;
  none.friends = {7.2, 1.2};
  none.followers = {3.5, 1.5};
  none.statuses = {9.5, 1.4};
  none.favourites = {2.5, 1.5};
  none.listed = {0.3, 0.8};
  none.age_days = {5.0, 1.2};
  none.bio_phrases = {"buy followers", "free crypto", "click link",
                      "win prizes", "follow back", "daily deals",
                      "auto post", "breaking news feed", "promo codes"};
  none.max_bio_phrases = 2;
  none.empty_bio_rate = 0.35;
  none.bio_hashtag_rate = 0.55;
  none.bio_mention_rate = 0.05;
  none.bio_emoticon_rate = 0.05;
  none.bio_numeric_rate = 0.70;
  none.profile_url_rate = 0.30;
  none.tweet_url_rate = 0.60;
  none.tweet_mention_rate = 0.05;

  spec.classes = {org, aff, non, none};
  return spec;
}

void validate(const SynthSpec& spec, int n) {
  const auto k = static_cast<int>(spec.classes.size());
  if (k < 2) throw Error("InvalidSpec", "need at least two classes");
  if (n < k) throw Error("InvalidSpec", "n must be at least the class count");
  double total = 0.0;
  for (const ClassSpec& c : spec.classes) {
    if (!(c.proportion > 0.0)) {
      throw Error("InvalidSpec", "every class proportion must be positive");
    }
    if (c.bio_phrases.empty() || c.max_bio_phrases < 1 || c.max_tweets < 1) {
      throw Error("InvalidSpec", "class needs bio phrases and tweets");
    }
    total += c.proportion;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error("InvalidSpec", "class proportions must sum to 1");
  }
  if (spec.keywords.empty()) throw Error("InvalidSpec", "no keywords");
}

namespace {

std::vector<int> quotas(const SynthSpec& spec, int n) {
  const std::size_t k = spec.classes.size();
  std::vector<int> sizes(k);
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double exact = spec.classes[i].proportion * n;
    sizes[i] = static_cast<int>(std::floor(exact));
    assigned += sizes[i];
    remainders.emplace_back(exact - sizes[i], i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int r = 0; r < n - assigned; ++r) {
    ++sizes[remainders[static_cast<std::size_t>(r) % k].second];
  }
  // Guarantee every class a member.
  for (std::size_t i = 0; i < k; ++i) {
    if (sizes[i] == 0) {
      auto donor = std::max_element(sizes.begin(), sizes.end());
      --*donor;
      sizes[i] = 1;
    }
  }
  return sizes;
}

std::uint64_t draw_count(Rng& rng, const LogNormal& d) {
  const double v = std::floor(std::exp(rng.normal(d.mu, d.sigma)));
  return static_cast<std::uint64_t>(std::clamp(v, 0.0, 1e12));
}

const std::vector<std::string>& pick_list(Label k) {
  static const std::vector<std::string> kHashtags[] = {
      {"#disasterrelief", "#preparedness", "#safety"},
      {"#volunteer", "#humanitarian", "#crisismapping"},
      {"#blessed", "#geauxtigers", "#nola", "#love"},
      {"#followback", "#deals", "#crypto", "#news"}};
  return kHashtags[std::min<Label>(k, 3)];
}

const std::vector<std::string>& handles() {
  static const std::vector<std::string> kHandles = {
      "@redcross", "@fema", "@unicef", "@nws", "@gohsep", "@salvationarmy"};
  return kHandles;
}

const std::vector<std::string>& fillers() {
  static const std::vector<std::string> kFillers = {
      "stay safe everyone", "roads are closed", "shelters are open",
      "water still rising", "donations needed", "praying for everyone",
      "volunteers needed tonight", "power is out", "rescue boats arriving",
      "check on your neighbors"};
  return kFillers;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(rng.below(items.size()))];
}

std::string make_bio(Rng& rng, const ClassSpec& c, Label k) {
  if (rng.bernoulli(c.empty_bio_rate)) return {};
  std::string bio;
  const auto phrases = 1 + rng.below(static_cast<std::uint64_t>(c.max_bio_phrases));
  for (std::uint64_t i = 0; i < phrases; ++i) {
    if (!bio.empty()) bio += ". ";
    bio += pick(rng, c.bio_phrases);
  }
  if (rng.bernoulli(c.bio_mention_rate)) bio += " " + pick(rng, handles());
  if (rng.bernoulli(c.bio_hashtag_rate)) bio += " " + pick(rng, pick_list(k));
  if (rng.bernoulli(c.bio_numeric_rate)) {
    bio += " " + std::to_string(1950 + rng.below(70));
  }
  if (rng.bernoulli(c.bio_emoticon_rate)) {
    static const std::vector<std::string> kFaces = {":)", ";)", "<3", ":D",
                                                    "\xE2\x9D\xA4"};
    bio += " " + pick(rng, kFaces);
  }
  return bio;
}

std::string make_tweet(Rng& rng, const SynthSpec& spec, const ClassSpec& c) {
  std::string text = pick(rng, spec.keywords) + " " + pick(rng, fillers());
  if (rng.bernoulli(c.tweet_mention_rate)) text += " " + pick(rng, handles());
  if (rng.bernoulli(c.tweet_url_rate)) {
    static constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string slug;
    for (int i = 0; i < 8; ++i) slug.push_back(kAlphabet[rng.below(36)]);
    text += " https://t.co/" + slug;
  }
  return text;
}

}  // namespace

SynthData synth_generate(const SynthSpec& spec, int n, std::uint64_t seed) {
  validate(spec, n);
  Rng rng(seed);

  const std::vector<int> sizes = quotas(spec, n);
  Labels assignment;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    assignment.insert(assignment.end(), static_cast<std::size_t>(sizes[k]),
                      static_cast<Label>(k));
  }
  rng.shuffle(std::span<Label>(assignment));

  SynthData out;
  const std::int64_t window = spec.event_days * 86400;
  std::uint64_t tweet_serial = 0;
  for (int u = 0; u < n; ++u) {
    const Label k = assignment[static_cast<std::size_t>(u)];
    const ClassSpec& c = spec.classes[static_cast<std::size_t>(k)];

    UserProfile p;
    p.user_id = std::to_string(1000000 + u);
    p.screen_name = "user" + std::to_string(u);
    p.bio = make_bio(rng, c, k);
    p.friends_count = draw_count(rng, c.friends);
    p.followers_count = draw_count(rng, c.followers);
    p.statuses_count = draw_count(rng, c.statuses);
    p.favourites_count = draw_count(rng, c.favourites);
    p.listed_count = draw_count(rng, c.listed);
    p.profile_url_present = rng.bernoulli(c.profile_url_rate);
    const std::uint64_t age = std::min<std::uint64_t>(draw_count(rng, c.age_days), 3650);

    const auto tweets = 1 + rng.below(static_cast<std::uint64_t>(c.max_tweets));
    std::int64_t first = spec.event_start +
                         static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(window)));
    p.created_at = first - static_cast<std::int64_t>(age) * 86400 -
                   static_cast<std::int64_t>(rng.below(86400));
    std::int64_t t = first;
    for (std::uint64_t i = 0; i < tweets; ++i) {
      TweetRecord rec;
      rec.tweet_id = std::to_string(770000000000000000ULL + tweet_serial++);
      rec.text = make_tweet(rng, spec, c);
      rec.created_at = t;
      rec.user = p;
      rec.user.observed_at = t;
      out.tweets.push_back(std::move(rec));
      t += static_cast<std::int64_t>(rng.below(6 * 3600));
    }
    out.labels.emplace_back(p.user_id, k);
  }
  // Interleave users the way a stream would: order tweets by time.
  std::stable_sort(out.tweets.begin(), out.tweets.end(),
                   [](const TweetRecord& a, const TweetRecord& b) {
                     return a.created_at < b.created_at;
                   });
  return out;
}

std::string format_labels_csv(
    const std::vector<std::pair<std::string, Label>>& labels) {
  std::ostringstream out;
  out << "user_id,label\n";
  for (const auto& [id, label] : labels) {
    out << csv_escape(id) << ','
        << kIdentityClassNames[static_cast<std::size_t>(label)] << '\n';
  }
  return out.str();
}

}  // namespace idclass
