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

#include "idclass/embedding.hpp"

#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "idclass/math.hpp"

namespace idclass {
namespace {

using Tokens = std::vector<std::string>;
using Corpus = std::vector<Tokens>;

// Two disjoint topics: {flood, rescue, shelter} and {coffee, music, travel}.
Corpus two_cluster_corpus() {
  Corpus c;
  for (int i = 0; i < 40; ++i) {
    c.push_back({"flood", "rescue", "shelter"});
    c.push_back({"shelter", "flood", "rescue"});
    c.push_back({"coffee", "music", "travel"});
    c.push_back({"travel", "coffee", "music"});
  }
  return c;
}

double dot(const EmbeddingModel& m, const std::string& center, const std::string& context) {
  const int i = *m.vocab.index_of(center);
  const int j = *m.vocab.index_of(context);
  return m.input.row(i).dot(m.output.row(j));
}

bool bitwise_equal(const RowMatrixX<double>& a, const RowMatrixX<double>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

TEST(PreprocessTest, Examples) {
  EXPECT_EQ(preprocess_bio("The official Twitter account for the American Red Cross.",
                           english_stopwords()),
            (Tokens{"official", "twitter", "account", "american", "red", "cross"}));
  EXPECT_TRUE(preprocess_bio("", english_stopwords()).empty());
  EXPECT_TRUE(preprocess_bio("a an the", english_stopwords()).empty());
  EXPECT_EQ(preprocess_bio("Founder @acme #ai", english_stopwords()),
            (Tokens{"founder", "acme", "ai"}));
}

TEST(PreprocessTest, StopwordListSize) {
  EXPECT_EQ(english_stopwords().size(), kEnglishStopwordCount);
}

TEST(VocabularyTest, FrequencyOrderAndPruning) {
  const Corpus c = {{"b", "a", "c"}, {"a", "b"}, {"a", "d"}};
  const Vocabulary v = Vocabulary::build(c, 2);
  ASSERT_EQ(v.size(), 2);
  EXPECT_EQ(v.token(0), "a");
  EXPECT_EQ(v.count(0), 3u);
  EXPECT_EQ(v.token(1), "b");
  EXPECT_FALSE(v.index_of("c").has_value());
  EXPECT_THROW(Vocabulary::from_entries({{"x", 1}, {"x", 2}}), Error);
}

TEST(SkipGramTest, SameSeedIsBitIdentical) {
  SkipGramParams p;
  p.dim = 16;
  const Corpus c = two_cluster_corpus();
  const EmbeddingModel a = train_skipgram(c, p, 99);
  const EmbeddingModel b = train_skipgram(c, p, 99);
  EXPECT_TRUE(bitwise_equal(a.input, b.input));
  EXPECT_TRUE(bitwise_equal(a.output, b.output));
  const EmbeddingModel other = train_skipgram(c, p, 100);
  EXPECT_FALSE(bitwise_equal(a.input, other.input));
}

TEST(SkipGramTest, CoOccurrenceSeparation) {
  SkipGramParams p;
  p.dim = 16;
  const Corpus c = two_cluster_corpus();
  int held = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const EmbeddingModel m = train_skipgram(c, p, seed);
    if (dot(m, "flood", "rescue") > dot(m, "flood", "music")) ++held;
  }
  EXPECT_GE(held, 95);
}

TEST(SkipGramTest, DegenerateCorpora) {
  SkipGramParams p;
  EXPECT_THROW(train_skipgram(Corpus{}, p, 1), Error);
  EXPECT_THROW(train_skipgram(Corpus{{}, {}}, p, 1), Error);
  // Every token pruned by min_count: an empty model that scores 0.
  const EmbeddingModel m = train_skipgram(Corpus{{"lonely"}}, p, 1);
  EXPECT_EQ(m.vocab.size(), 0);
  EXPECT_EQ(bio_likelihood_score(m, Tokens{"lonely", "lonely"}), 0.0);
  // One vocabulary word and no pairs within a window: the model is untrained.
  p.min_count = 1;
  const EmbeddingModel single = train_skipgram(Corpus{{"solo"}}, p, 1);
  EXPECT_EQ(single.vocab.size(), 1);
  EXPECT_TRUE(single.output.isZero(0.0));
}

TEST(SkipGramTest, InvalidParams) {
  SkipGramParams p;
  p.dim = 0;
  EXPECT_THROW(train_skipgram(two_cluster_corpus(), p, 1), Error);
}

TEST(BioScoreTest, RangeAndZeroCases) {
  SkipGramParams p;
  p.dim = 8;
  const EmbeddingModel m = train_skipgram(two_cluster_corpus(), p, 3);
  EXPECT_EQ(bio_likelihood_score(m, Tokens{}), 0.0);
  EXPECT_EQ(bio_likelihood_score(m, Tokens{"unknown", "words"}), 0.0);
  EXPECT_EQ(bio_likelihood_score(m, Tokens{"flood"}), 0.0);
  EXPECT_EQ(bio_likelihood_score(m, Tokens{"flood", "zzz", "zzz", "zzz"}), 0.0);
  const double s = bio_likelihood_score(m, Tokens{"flood", "rescue"});
  EXPECT_LT(s, 0.0);
  EXPECT_TRUE(std::isfinite(s));
}

TEST(BioScoreTest, MatchesIndependentPairEnumeration) {
  SkipGramParams p;
  p.dim = 8;
  p.window = 2;
  const EmbeddingModel m = train_skipgram(two_cluster_corpus(), p, 5);
  const Tokens bio = {"flood", "oov", "rescue", "music", "shelter"};
  double sum = 0.0;
  int pairs = 0;
  for (int t = 0; t < 5; ++t) {
    for (int c = 0; c < 5; ++c) {
      if (t == c || std::abs(t - c) > 2 || bio[t] == "oov" || bio[c] == "oov") continue;
      const double x = dot(m, bio[t], bio[c]);
      sum += -std::log1p(std::exp(-x));
      ++pairs;
    }
  }
  EXPECT_EQ(pairs, 8);
  EXPECT_NEAR(bio_likelihood_score(m, bio), sum / pairs, 1e-12);
}

TEST(BioScoreTest, DuplicatesOutsideWindowLeavePairsUnchanged) {
  SkipGramParams p;
  p.dim = 8;
  p.window = 1;
  const EmbeddingModel m = train_skipgram(two_cluster_corpus(), p, 5);
  const Tokens base = {"flood", "rescue"};
  const Tokens padded = {"flood", "rescue", "oov", "oov", "flood", "rescue"};
  EXPECT_NEAR(bio_likelihood_score(m, base), bio_likelihood_score(m, padded), 1e-15);
}

TEST(EmbeddingJsonTest, RoundTripIsBitExact) {
  SkipGramParams p;
  p.dim = 8;
  const EmbeddingModel m = train_skipgram(two_cluster_corpus(), p, 17);
  const EmbeddingModel r = embedding_from_json(embedding_to_json(m));
  EXPECT_TRUE(bitwise_equal(m.input, r.input));
  EXPECT_TRUE(bitwise_equal(m.output, r.output));
  EXPECT_EQ(r.seed, 17u);
  const Tokens bio = {"coffee", "music", "travel", "flood"};
  EXPECT_EQ(bio_likelihood_score(m, bio), bio_likelihood_score(r, bio));
}

TEST(EmbeddingJsonTest, CorruptInputs) {
  auto category = [](std::string_view text) {
    try {
      embedding_from_json(text);
    } catch (const Error& e) {
      return std::string(e.category());
    }
    return std::string("none");
  };
  SkipGramParams p;
  p.dim = 4;
  const std::string good = embedding_to_json(train_skipgram(two_cluster_corpus(), p, 1));
  EXPECT_EQ(category(good.substr(0, good.size() / 2)), "CorruptModel");
  EXPECT_EQ(category("{}"), "CorruptModel");
  std::string bad_dim = good;
  bad_dim.replace(bad_dim.find("\"dim\":4"), 7, "\"dim\":0");
  EXPECT_EQ(category(bad_dim), "CorruptModel");
  std::string bad_shape = good;
  bad_shape.replace(bad_shape.find("\"dim\":4"), 7, "\"dim\":5");
  EXPECT_EQ(category(bad_shape), "CorruptModel");
}

}  // namespace
}  // namespace idclass
