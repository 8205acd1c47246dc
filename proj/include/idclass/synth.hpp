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

#ifndef IDCLASS_SYNTH_HPP_
#define IDCLASS_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "idclass/ingestion.hpp"
#include "idclass/types.hpp"

namespace idclass {

/// count = floor(exp(N(mu, sigma))).
struct LogNormal {
  double mu = 0.0;
  double sigma = 1.0;
};

/// Generative parameters for one identity class.
struct ClassSpec {
  double proportion = 0.25;
  LogNormal friends, followers, statuses, favourites, listed, age_days;
  /// Bio phrases; 1..max_bio_phrases are drawn per bio.
  std::vector<std::string> bio_phrases;
  int max_bio_phrases = 2;
  double empty_bio_rate = 0.0;
  double bio_hashtag_rate = 0.0;
  double bio_mention_rate = 0.0;
  double bio_emoticon_rate = 0.0;
  double bio_numeric_rate = 0.0;
  double profile_url_rate = 0.0;
  double tweet_url_rate = 0.0;
  double tweet_mention_rate = 0.0;
  int max_tweets = 3;
};

struct SynthSpec {
  std::vector<ClassSpec> classes;
  std::vector<std::string> keywords;  // track terms woven into tweet text
  std::int64_t event_start = 1471219200;  // 2016-08-15T00:00:00Z
  std::int64_t event_days = 14;
};

/// Encodes the qualitative contrasts between identity classes: organizations
/// are listed and followed more and link out more, affiliated users mention
/// organizations in their bios, non-affiliated bios are informal.
SynthSpec default_synth_spec();

/// Throws "InvalidSpec" unless every proportion is positive and they sum to 1.
void validate(const SynthSpec& spec, int n);

struct SynthData {
  std::vector<TweetRecord> tweets;
  std::vector<std::pair<std::string, Label>> labels;  // user_id, class
};

/// Class sizes are fixed quotas (largest remainder) of n; draws are
/// deterministic in `seed`.
SynthData synth_generate(const SynthSpec& spec, int n, std::uint64_t seed);

std::string format_labels_csv(
    const std::vector<std::pair<std::string, Label>>& labels);

}  // namespace idclass

#endif  // IDCLASS_SYNTH_HPP_
