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

#ifndef IDCLASS_EMBEDDING_HPP_
#define IDCLASS_EMBEDDING_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "idclass/types.hpp"

namespace idclass {

using StopwordSet = std::unordered_set<std::string>;

/// The shipped English stopword list (179 entries).
const StopwordSet& english_stopwords();
inline constexpr std::size_t kEnglishStopwordCount = 179;

/// Tokenizes, strips '#'/'@' sigils, and drops stopwords.
std::vector<std::string> preprocess_bio(std::string_view bio,
                                        const StopwordSet& stopwords);

class Vocabulary {
 public:
  Vocabulary() = default;

  /// Keeps tokens with frequency >= min_count, indexed by descending
  /// frequency then ascending token.
  static Vocabulary build(std::span<const std::vector<std::string>> corpus,
                          int min_count);

  /// Rebuilds from an ordered (token, count) list, e.g. after loading.
  static Vocabulary from_entries(
      std::vector<std::pair<std::string, std::uint64_t>> entries);

  std::optional<int> index_of(std::string_view token) const;
  const std::string& token(int index) const { return tokens_[index]; }
  std::uint64_t count(int index) const { return counts_[index]; }
  int size() const { return static_cast<int>(tokens_.size()); }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, int> index_;
};

struct SkipGramParams {
  int dim = 50;
  int window = 2;
  int negative = 5;
  int epochs = 5;
  double learning_rate = 0.025;
  int min_count = 2;
};

/// Skip-gram word vectors: `input` rows are center-word vectors, `output`
/// rows are context vectors, both |V| x dim.
struct EmbeddingModel {
  SkipGramParams params;
  std::uint64_t seed = 0;
  Vocabulary vocab;
  RowMatrixX<double> input;
  RowMatrixX<double> output;
};

/// Skip-gram with negative sampling. Deterministic for a given
/// (corpus, params, seed). Throws "EmptyCorpus" only when the corpus holds no
/// tokens at all; a corpus whose tokens are all pruned yields an empty model
/// that scores every bio 0.
EmbeddingModel train_skipgram(std::span<const std::vector<std::string>> corpus,
                              const SkipGramParams& params, std::uint64_t seed);

/// Mean log-sigmoid of input(t) . output(c) over ordered in-vocabulary
/// position pairs within the window; 0 when there are no such pairs.
double bio_likelihood_score(const EmbeddingModel& model,
                            std::span<const std::string> tokens);

std::string embedding_to_json(const EmbeddingModel& model);
/// Throws Error "CorruptModel".
EmbeddingModel embedding_from_json(std::string_view text);

}  // namespace idclass

#endif  // IDCLASS_EMBEDDING_HPP_
