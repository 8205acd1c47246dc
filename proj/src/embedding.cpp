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

#include <algorithm>
#include <cmath>
#include <map>

#include "json.hpp"
#include "idclass/math.hpp"
#include "idclass/random.hpp"
#include "idclass/text.hpp"

namespace idclass {

std::vector<std::string> preprocess_bio(std::string_view bio,
                                        const StopwordSet& stopwords) {
  std::vector<std::string> out;
  for (std::string& tok : text::tokenize(bio)) {
    if (tok[0] == '#' || tok[0] == '@') tok.erase(0, 1);
    if (tok.empty() || stopwords.contains(tok)) continue;
    out.push_back(std::move(tok));
  }
  return out;
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> corpus,
                             int min_count) {
  std::map<std::string, std::uint64_t> freq;
  for (const auto& doc : corpus) {
    for (const auto& tok : doc) ++freq[tok];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [tok, n] : freq) {
    if (n >= static_cast<std::uint64_t>(std::max(min_count, 1))) {
      kept.emplace_back(tok, n);
    }
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  return from_entries(std::move(kept));
}

Vocabulary Vocabulary::from_entries(
    std::vector<std::pair<std::string, std::uint64_t>> entries) {
  Vocabulary v;
  for (auto& [tok, n] : entries) {
    const int idx = static_cast<int>(v.tokens_.size());
    if (!v.index_.try_emplace(tok, idx).second) {
      throw Error("CorruptModel", "duplicate vocabulary token '" + tok + "'");
    }
    v.tokens_.push_back(std::move(tok));
    v.counts_.push_back(n);
  }
  return v;
}

std::optional<int> Vocabulary::index_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<int> to_indices(const Vocabulary& vocab,
                            std::span<const std::string> tokens) {
  std::vector<int> idx;
  idx.reserve(tokens.size());
  for (const auto& t : tokens) idx.push_back(vocab.index_of(t).value_or(-1));
  return idx;
}

void validate(const SkipGramParams& p) {
  if (p.dim < 1 || p.window < 1 || p.negative < 0 || p.epochs < 0 ||
      !(p.learning_rate > 0.0) || p.min_count < 1) {
    throw Error("InvalidParams", "invalid skip-gram hyperparameters");
  }
}

}  // namespace

EmbeddingModel train_skipgram(std::span<const std::vector<std::string>> corpus,
                              const SkipGramParams& params,
                              std::uint64_t seed) {
  validate(params);
  const bool any_token =
      std::any_of(corpus.begin(), corpus.end(),
                  [](const auto& doc) { return !doc.empty(); });
  if (!any_token) throw Error("EmptyCorpus", "bio corpus contains no tokens");

  EmbeddingModel model;
  model.params = params;
  model.seed = seed;
  model.vocab = Vocabulary::build(corpus, params.min_count);

  const int vocab_size = model.vocab.size();
  const int dim = params.dim;
  Rng rng(seed);
  model.input.resize(vocab_size, dim);
  for (Index i = 0; i < model.input.size(); ++i) {
    model.input.data()[i] = (rng.uniform() - 0.5) / dim;
  }
  model.output = RowMatrixX<double>::Zero(vocab_size, dim);
  if (vocab_size == 0) return model;

  // Unigram^0.75 noise distribution as a cumulative table.
  std::vector<double> cumulative(static_cast<std::size_t>(vocab_size));
  double total = 0.0;
  for (int i = 0; i < vocab_size; ++i) {
    total += std::pow(static_cast<double>(model.vocab.count(i)), 0.75);
    cumulative[static_cast<std::size_t>(i)] = total;
  }
  auto draw_negative = [&] {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return static_cast<int>(it - cumulative.begin());
  };

  std::vector<std::vector<int>> docs;
  docs.reserve(corpus.size());
  std::size_t positions = 0;
  for (const auto& doc : corpus) {
    docs.push_back(to_indices(model.vocab, doc));
    positions += static_cast<std::size_t>(
        std::count_if(docs.back().begin(), docs.back().end(),
                      [](int i) { return i >= 0; }));
  }
  const double total_steps =
      static_cast<double>(positions) * static_cast<double>(params.epochs);

  Eigen::RowVectorXd grad(dim);
  auto update = [&](int center, int context, double label, double lr) {
    const double score = model.input.row(center).dot(model.output.row(context));
    const double g = lr * (label - sigmoid(score));
    grad.noalias() += g * model.output.row(context);
    model.output.row(context).noalias() += g * model.input.row(center);
  };

  double step = 0.0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    for (const auto& doc : docs) {
      const auto n = static_cast<std::ptrdiff_t>(doc.size());
      for (std::ptrdiff_t t = 0; t < n; ++t) {
        const int center = doc[static_cast<std::size_t>(t)];
        if (center < 0) continue;
        const double lr =
            params.learning_rate * std::max(0.01, 1.0 - step / total_steps);
        step += 1.0;
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, t - params.window);
        const std::ptrdiff_t hi = std::min(n - 1, t + params.window);
        for (std::ptrdiff_t c = lo; c <= hi; ++c) {
          const int context = doc[static_cast<std::size_t>(c)];
          if (c == t || context < 0) continue;
          grad.setZero();
          update(center, context, 1.0, lr);
          for (int k = 0; k < params.negative; ++k) {
            const int noise = draw_negative();
            if (noise == context) continue;
            update(center, noise, 0.0, lr);
          }
          model.input.row(center).noalias() += grad;
        }
      }
    }
  }
  return model;
}

double bio_likelihood_score(const EmbeddingModel& model,
                            std::span<const std::string> tokens) {
  const std::vector<int> idx = to_indices(model.vocab, tokens);
  const auto n = static_cast<std::ptrdiff_t>(idx.size());
  const std::ptrdiff_t window = model.params.window;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const int center = idx[static_cast<std::size_t>(t)];
    if (center < 0) continue;
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, t - window);
    const std::ptrdiff_t hi = std::min(n - 1, t + window);
    for (std::ptrdiff_t c = lo; c <= hi; ++c) {
      const int context = idx[static_cast<std::size_t>(c)];
      if (c == t || context < 0) continue;
      sum += log_sigmoid(model.input.row(center).dot(model.output.row(context)));
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
}

namespace {

using nlohmann::json;

constexpr std::string_view kEmbeddingFormat = "idclass-embedding";
constexpr int kEmbeddingVersion = 1;

json matrix_to_json(const RowMatrixX<double>& m) {
  return json(std::vector<double>(m.data(), m.data() + m.size()));
}

RowMatrixX<double> matrix_from_json(const json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows * cols) {
    throw Error("CorruptModel", "embedding matrix has the wrong shape");
  }
  RowMatrixX<double> m(rows, cols);
  for (Index i = 0; i < rows * cols; ++i) {
    const json& v = j[static_cast<std::size_t>(i)];
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw Error("CorruptModel", "embedding matrix holds a non-finite value");
    }
    m.data()[i] = v.get<double>();
  }
  return m;
}

}  // namespace

std::string embedding_to_json(const EmbeddingModel& model) {
  const SkipGramParams& p = model.params;
  json vocab = json::array();
  for (int i = 0; i < model.vocab.size(); ++i) {
    vocab.push_back({model.vocab.token(i), model.vocab.count(i)});
  }
  json doc = {
      {"format", kEmbeddingFormat},
      {"version", kEmbeddingVersion},
      {"params",
       {{"dim", p.dim},
        {"window", p.window},
        {"negative", p.negative},
        {"epochs", p.epochs},
        {"learning_rate", p.learning_rate},
        {"min_count", p.min_count}}},
      {"seed", model.seed},
      {"vocab", std::move(vocab)},
      {"input", matrix_to_json(model.input)},
      {"output", matrix_to_json(model.output)},
  };
  return doc.dump();
}

EmbeddingModel embedding_from_json(std::string_view text) {
  const json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error("CorruptModel", "embedding file is not valid JSON");
  }
  try {
    if (doc.at("format") != kEmbeddingFormat) {
      throw Error("CorruptModel", "not an embedding model file");
    }
    const int version = doc.at("version").get<int>();
    if (version != kEmbeddingVersion) {
      throw Error("CorruptModel", "unsupported embedding format version " +
                                      std::to_string(version));
    }
    EmbeddingModel m;
    const json& p = doc.at("params");
    m.params.dim = p.at("dim").get<int>();
    m.params.window = p.at("window").get<int>();
    m.params.negative = p.at("negative").get<int>();
    m.params.epochs = p.at("epochs").get<int>();
    m.params.learning_rate = p.at("learning_rate").get<double>();
    m.params.min_count = p.at("min_count").get<int>();
    validate(m.params);
    m.seed = doc.at("seed").get<std::uint64_t>();
    std::vector<std::pair<std::string, std::uint64_t>> entries;
    for (const json& e : doc.at("vocab")) {
      entries.emplace_back(e.at(0).get<std::string>(),
                           e.at(1).get<std::uint64_t>());
    }
    m.vocab = Vocabulary::from_entries(std::move(entries));
    m.input = matrix_from_json(doc.at("input"), m.vocab.size(), m.params.dim);
    m.output = matrix_from_json(doc.at("output"), m.vocab.size(), m.params.dim);
    return m;
  } catch (const json::exception& e) {
    throw Error("CorruptModel", std::string("embedding file: ") + e.what());
  } catch (const Error& e) {
    if (e.category() == "CorruptModel") throw;
    throw Error("CorruptModel", std::string("embedding file: ") + e.what());
  }
}

}  // namespace idclass
