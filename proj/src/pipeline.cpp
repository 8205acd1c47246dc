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

#include "idclass/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "idclass/analysis.hpp"
#include "idclass/io.hpp"
#include "idclass/random.hpp"
#include "idclass/serialize.hpp"
#include "idclass/synth.hpp"

namespace idclass {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kEmbeddingFile = "embedding.json";
constexpr const char* kClassifierFile = "classifier.json";

std::string hex64(std::uint64_t v) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx",
                static_cast<unsigned long long>(v));
  return buf.data();
}

std::string path_or_empty(const fs::path& p) { return p.generic_string(); }

std::ifstream open_input(const fs::path& path) {
  if (path.empty()) throw Error("MissingInput", "no --input given");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot open " + path.string());
  return in;
}

fs::path output_or(const PipelineConfig& c, const fs::path& fallback) {
  return c.output.empty() ? fallback : c.output;
}

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

std::string label_name(Label k) {
  return std::string(kIdentityClassNames[static_cast<std::size_t>(k)]);
}

std::vector<std::string> identity_names() {
  return {kIdentityClassNames.begin(), kIdentityClassNames.end()};
}

struct Dataset {
  std::vector<TweetRecord> records;
  LabeledDataset labeled;
};

Dataset load_labeled(const PipelineConfig& config) {
  if (config.labels.empty()) throw Error("MissingInput", "no --labels given");
  Dataset d;
  d.records = read_records(config.input);
  const auto profiles = extract_user_profiles(d.records);
  d.labeled = join_labels(profiles, read_labels(config.labels));
  if (d.labeled.unresolved > 0) {
    warn(std::to_string(d.labeled.unresolved) +
         " labeled user ids have no profile in the input");
  }
  if (d.labeled.profiles.empty()) {
    throw Error("EmptyInput", "no labeled users found in the input");
  }
  return d;
}

EmbeddingModel load_or_train_embedding(const PipelineConfig& config,
                                       std::span<const UserProfile> corpus_users,
                                       bool save_if_trained) {
  const fs::path path = config.model_dir / kEmbeddingFile;
  if (fs::exists(path)) return embedding_from_json(read_file(path));
  EmbeddingModel model = train_embedding(
      corpus_users, config.embedding, stage_seed(config.seed, "embedding"));
  if (save_if_trained) {
    json doc = json::parse(embedding_to_json(model));
    doc["meta"] = artifact_meta(config);
    write_file_atomic(path, doc.dump());
  }
  return model;
}

}  // namespace

json config_json(const PipelineConfig& c) {
  return {{"input", path_or_empty(c.input)},
          {"keywords", path_or_empty(c.keywords)},
          {"labels", path_or_empty(c.labels)},
          {"predictions", path_or_empty(c.predictions)},
          {"model_dir", path_or_empty(c.model_dir)},
          {"report_dir", path_or_empty(c.report_dir)},
          {"output", path_or_empty(c.output)},
          {"framework", to_string(c.framework)},
          {"features", to_string(c.features)},
          {"gbdt", to_json(c.gbdt)},
          {"embedding",
           {{"dim", c.embedding.dim},
            {"window", c.embedding.window},
            {"negative", c.embedding.negative},
            {"epochs", c.embedding.epochs},
            {"learning_rate", c.embedding.learning_rate},
            {"min_count", c.embedding.min_count}}},
          {"folds", c.folds},
          {"bins", c.bins},
          {"synth_n", c.synth_n},
          {"grid", c.grid},
          {"per_fold_embedding", c.per_fold_embedding},
          {"seed", c.seed}};
}

std::string config_hash(const PipelineConfig& c) {
  return hex64(fnv1a64(config_json(c).dump()));
}

json artifact_meta(const PipelineConfig& c) {
  return {{"format_version", kArtifactFormatVersion},
          {"seed", c.seed},
          {"config_hash", config_hash(c)},
          {"config", config_json(c)}};
}

std::string csv_meta_line(const PipelineConfig& c) {
  return "# idclass format_version=" + std::to_string(kArtifactFormatVersion) +
         " seed=" + std::to_string(c.seed) + " config_hash=" + config_hash(c) +
         "\n";
}

std::vector<TweetRecord> read_records(const fs::path& path, StreamStats* stats) {
  std::ifstream in = open_input(path);
  std::vector<TweetRecord> records;
  const StreamStats s = stream_records(
      in, [&](const TweetRecord& r, std::string_view) { records.push_back(r); },
      [&](const MalformedLine& e) { warn(e.what()); });
  if (stats) *stats = s;
  return records;
}

std::vector<std::pair<std::string, Label>> read_labels(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::pair<std::string, Label>> out;
  std::unordered_map<std::string, std::size_t> seen;
  bool header = false;
  std::size_t line_number = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = csv_split(line);
    if (!header) {
      if (fields.size() < 2 || fields[0] != "user_id" || fields[1] != "label") {
        throw Error("InvalidLabels", "labels file must start with 'user_id,label'");
      }
      header = true;
      continue;
    }
    if (fields.size() < 2 || fields[0].empty()) {
      throw Error("InvalidLabels", "line " + std::to_string(line_number) +
                                       ": expected user_id,label");
    }
    const auto cls = parse_identity_class(fields[1]);
    if (!cls) {
      throw Error("InvalidLabels", "line " + std::to_string(line_number) +
                                       ": unknown label '" + fields[1] + "'");
    }
    if (!seen.emplace(fields[0], out.size()).second) {
      throw Error("InvalidLabels", "duplicate user id " + fields[0]);
    }
    out.emplace_back(fields[0], static_cast<Label>(*cls));
  }
  if (!header) throw Error("InvalidLabels", "labels file has no header");
  return out;
}

std::unordered_map<std::string, Label> read_prediction_classes(const fs::path& path) {
  std::ifstream in = open_input(path);
  std::unordered_map<std::string, Label> out;
  bool header = false;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = csv_split(line);
    if (!header) {
      header = true;
      continue;
    }
    if (fields.size() < 3) throw Error("InvalidPredictions", "short prediction row");
    const auto cls = parse_identity_class(fields[2]);
    if (!cls) throw Error("InvalidPredictions", "unknown class '" + fields[2] + "'");
    out[fields[0]] = static_cast<Label>(*cls);
  }
  return out;
}

LabeledDataset join_labels(std::span<const UserProfile> profiles,
                           std::span<const std::pair<std::string, Label>> labels) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    index.emplace(profiles[i].user_id, i);
  }
  LabeledDataset out;
  for (const auto& [id, label] : labels) {
    auto it = index.find(id);
    if (it == index.end()) {
      ++out.unresolved;
      continue;
    }
    out.profiles.push_back(profiles[it->second]);
    out.labels.push_back(label);
  }
  return out;
}

std::vector<std::vector<std::string>> bio_corpus(std::span<const UserProfile> profiles) {
  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(profiles.size());
  for (const UserProfile& p : profiles) {
    corpus.push_back(preprocess_bio(p.bio, english_stopwords()));
  }
  return corpus;
}

Matrix featurize(std::span<const UserProfile> profiles, const EmbeddingModel& embedding) {
  Matrix X(static_cast<Index>(profiles.size()), kNumFeatures);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto tokens = preprocess_bio(profiles[i].bio, english_stopwords());
    X.row(static_cast<Index>(i)) =
        extract_features(profiles[i], bio_likelihood_score(embedding, tokens))
            .transpose();
  }
  return X;
}

EmbeddingModel train_embedding(std::span<const UserProfile> profiles,
                               const SkipGramParams& params, std::uint64_t seed) {
  const auto corpus = bio_corpus(profiles);
  return train_skipgram(corpus, params, seed);
}

StreamStats cmd_filter(const PipelineConfig& config) {
  if (config.keywords.empty()) throw Error("MissingInput", "no --keywords given");
  std::ifstream kw_in = open_input(config.keywords);
  const KeywordSet keywords = KeywordSet::read(kw_in);
  std::ifstream in = open_input(config.input);

  const bool to_stdout = config.output.empty() || config.output == "-";
  std::ostringstream buffer;
  std::ostream& out = to_stdout ? std::cout : buffer;
  const StreamStats stats = stream_filter(
      in, keywords,
      [&](const TweetRecord&, std::string_view line) { out << line << '\n'; },
      [&](const MalformedLine& e) { warn(e.what()); });

  if (!to_stdout) {
    write_file_atomic(config.output, buffer.str());
    json meta = artifact_meta(config);
    meta["counters"] = {{"read", stats.read},
                        {"matched", stats.matched},
                        {"malformed", stats.malformed}};
    fs::path sidecar = config.output;
    sidecar += ".meta.json";
    write_file_atomic(sidecar, meta.dump(2) + "\n");
  }
  return stats;
}

void cmd_synth(const PipelineConfig& config) {
  const fs::path dir = config.output.empty() ? fs::path(".") : config.output;
  const SynthData data = synth_generate(default_synth_spec(), config.synth_n,
                                        stage_seed(config.seed, "synth"));
  std::string tweets;
  for (const TweetRecord& r : data.tweets) {
    tweets += format_tweet_line(r);
    tweets += '\n';
  }
  write_file_atomic(dir / "tweets.jsonl", tweets);
  write_file_atomic(dir / "labels.csv",
                    csv_meta_line(config) + format_labels_csv(data.labels));
  json meta = artifact_meta(config);
  meta["users"] = data.labels.size();
  meta["tweets"] = data.tweets.size();
  write_file_atomic(dir / "tweets.jsonl.meta.json", meta.dump(2) + "\n");
}

void cmd_embed(const PipelineConfig& config) {
  const auto profiles = extract_user_profiles(read_records(config.input));
  const EmbeddingModel model = train_embedding(
      profiles, config.embedding, stage_seed(config.seed, "embedding"));
  json doc = json::parse(embedding_to_json(model));
  doc["meta"] = artifact_meta(config);
  write_file_atomic(config.model_dir / kEmbeddingFile, doc.dump());
}

void cmd_featurize(const PipelineConfig& config) {
  const auto profiles = extract_user_profiles(read_records(config.input));
  const EmbeddingModel embedding = load_or_train_embedding(config, profiles, false);
  const Matrix X = featurize(profiles, embedding);
  std::vector<std::string> ids;
  for (const auto& p : profiles) ids.push_back(p.user_id);
  std::ostringstream out;
  out << csv_meta_line(config);
  write_feature_csv(out, ids, X);
  write_file_atomic(output_or(config, config.report_dir / "features.csv"), out.str());
}

void cmd_train(const PipelineConfig& config) {
  const Dataset d = load_labeled(config);
  const auto all_profiles = extract_user_profiles(d.records);
  const EmbeddingModel embedding = load_or_train_embedding(config, all_profiles, true);
  const Matrix X =
      project_category(featurize(d.labeled.profiles, embedding), config.features);
  const MulticlassModel model =
      train_framework(config.framework, X, d.labeled.labels, config.gbdt,
                      stage_seed(config.seed, "train"), kNumIdentityClasses,
                      config.features);
  json meta = artifact_meta(config);
  meta["training_users"] = d.labeled.labels.size();
  meta["base_learners"] = model.learners.size();
  write_file_atomic(config.model_dir / kClassifierFile, save_model(model, meta));
}

std::vector<CvReport> cmd_evaluate(const PipelineConfig& config) {
  if (config.folds < 2) throw Error("InvalidParams", "--folds must be >= 2");
  const Dataset d = load_labeled(config);
  const auto all_profiles = extract_user_profiles(d.records);
  // The embedding is label-free, so one model over the whole bio corpus is
  // shared by every fold unless per-fold retraining is requested.
  const EmbeddingModel embedding = train_embedding(
      all_profiles, config.embedding, stage_seed(config.seed, "embedding"));
  const Matrix X = featurize(d.labeled.profiles, embedding);

  FoldFeatureFn per_fold = [&](std::span<const Index> train,
                               std::span<const Index> test) {
    std::vector<UserProfile> train_users;
    for (Index i : train) train_users.push_back(d.labeled.profiles[static_cast<std::size_t>(i)]);
    const EmbeddingModel fold_embedding = train_embedding(
        train_users, config.embedding, stage_seed(config.seed, "embedding"));
    std::vector<UserProfile> test_users;
    for (Index i : test) test_users.push_back(d.labeled.profiles[static_cast<std::size_t>(i)]);
    return std::pair<Matrix, Matrix>(featurize(train_users, fold_embedding),
                                     featurize(test_users, fold_embedding));
  };

  std::vector<std::pair<Framework, FeatureCategory>> runs;
  if (config.grid) {
    for (auto f : {Framework::kSingle, Framework::kOva, Framework::kOvo}) {
      for (auto c : {FeatureCategory::kSocial, FeatureCategory::kActivity,
                     FeatureCategory::kRepresentation, FeatureCategory::kAll}) {
        runs.emplace_back(f, c);
      }
    }
  } else {
    runs.emplace_back(config.framework, config.features);
  }

  std::vector<CvReport> reports;
  for (const auto& [framework, category] : runs) {
    reports.push_back(
        config.per_fold_embedding
            ? cross_validate(framework, category, per_fold, d.labeled.labels,
                             config.gbdt, config.folds, config.seed)
            : cross_validate(framework, category, X, d.labeled.labels,
                             config.gbdt, config.folds, config.seed));
  }

  const auto names = identity_names();
  json doc = {{"meta", artifact_meta(config)},
              {"labeled_users", d.labeled.labels.size()},
              {"unresolved_labels", d.labeled.unresolved},
              {"class_names", names},
              {"reports", json::array()}};
  for (const CvReport& r : reports) doc["reports"].push_back(to_json(r, names));
  write_file_atomic(config.report_dir / "evaluation.json", doc.dump(2) + "\n");
  write_file_atomic(config.report_dir / "evaluation_table.txt",
                    "# " + csv_meta_line(config).substr(2) +
                        format_results_table(reports));
  return reports;
}

std::size_t predict_stream(std::istream& in, std::ostream& out,
                           const EmbeddingModel& embedding,
                           const MulticlassModel& model,
                           const PipelineConfig& config) {
  out << csv_meta_line(config) << "user_id,tweet_id,class";
  for (const auto& name : model.class_names) out << ",score_" << name;
  out << '\n';
  std::size_t rows = 0;
  stream_records(
      in,
      [&](const TweetRecord& r, std::string_view) {
        const auto tokens = preprocess_bio(r.user.bio, english_stopwords());
        const Vector x = project_category(
            extract_features(r.user, bio_likelihood_score(embedding, tokens)),
            model.category);
        const Prediction p = predict(model, x);
        out << csv_escape(r.user.user_id) << ',' << csv_escape(r.tweet_id) << ','
            << model.class_names[static_cast<std::size_t>(p.label)];
        for (Index k = 0; k < p.scores.size(); ++k) {
          out << ',' << format_double(p.scores(k));
        }
        out << '\n';
        ++rows;
      },
      [&](const MalformedLine& e) { warn(e.what()); });
  out.flush();
  return rows;
}

std::size_t cmd_predict(const PipelineConfig& config) {
  const EmbeddingModel embedding =
      embedding_from_json(read_file(config.model_dir / kEmbeddingFile));
  const MulticlassModel model =
      load_model(read_file(config.model_dir / kClassifierFile));
  std::ifstream in = open_input(config.input);

  const fs::path target = output_or(config, config.report_dir / "predictions.csv");
  if (target == "-") return predict_stream(in, std::cout, embedding, model, config);

  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  std::size_t rows = 0;
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IoError", "cannot write " + tmp.string());
    rows = predict_stream(in, out, embedding, model, config);
  }
  fs::rename(tmp, target);
  return rows;
}

void cmd_analyze(const PipelineConfig& config) {
  const auto records = read_records(config.input);
  std::unordered_map<std::string, Label> class_of;
  if (!config.predictions.empty()) {
    class_of = read_prediction_classes(config.predictions);
  } else {
    for (const auto& [id, label] : read_labels(config.labels)) class_of[id] = label;
  }
  const PracticeReport practice = content_practice_report(records, class_of);

  const auto names = identity_names();
  std::ostringstream dist;
  dist << csv_meta_line(config) << "label,users,percent\n";
  std::ostringstream table;
  table << csv_meta_line(config)
        << "label,tweets,url_share,mention_share,users,mean_friends,mean_followers\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  json classes = json::array();
  for (std::size_t k = 0; k < practice.per_class.size(); ++k) {
    const ClassPractice& c = practice.per_class[k];
    dist << names[k] << ',' << c.users << ','
         << format_double(practice.user_distribution[k]) << '\n';
    table << names[k] << ',' << c.tweets << ',' << opt(c.url_share) << ','
          << opt(c.mention_share) << ',' << c.users << ',' << opt(c.mean_friends)
          << ',' << opt(c.mean_followers) << '\n';
    auto jopt = [](const std::optional<double>& v) { return v ? json(*v) : json(); };
    classes.push_back({{"label", names[k]},
                       {"tweets", c.tweets},
                       {"url_share", jopt(c.url_share)},
                       {"mention_share", jopt(c.mention_share)},
                       {"users", c.users},
                       {"user_percent", practice.user_distribution[k]},
                       {"mean_friends", jopt(c.mean_friends)},
                       {"mean_followers", jopt(c.mean_followers)}});
  }
  json doc = {{"meta", artifact_meta(config)},
              {"class_source", config.predictions.empty() ? "labels" : "predictions"},
              {"unmapped_tweets", practice.unmapped_tweets},
              {"classes", std::move(classes)}};
  write_file_atomic(config.report_dir / "label_distribution.csv", dist.str());
  write_file_atomic(config.report_dir / "content_practice.csv", table.str());
  write_file_atomic(config.report_dir / "analysis.json", doc.dump(2) + "\n");
}

void cmd_rank_features(const PipelineConfig& config) {
  const Dataset d = load_labeled(config);
  const auto all_profiles = extract_user_profiles(d.records);
  const EmbeddingModel embedding = load_or_train_embedding(config, all_profiles, false);
  const Matrix X = featurize(d.labeled.profiles, embedding);
  const auto names = category_feature_names(FeatureCategory::kAll);
  const FeatureRanking ranking = chi_square_rank(X, d.labeled.labels, names, config.bins);

  std::ostringstream out;
  out << csv_meta_line(config) << "rank,feature,category,chi2,dof,degenerate\n";
  for (std::size_t i = 0; i < ranking.features.size(); ++i) {
    const FeatureScore& s = ranking.features[i];
    const auto spec = std::find_if(kFeatureSchema.begin(), kFeatureSchema.end(),
                                   [&](const FeatureSpec& f) { return f.name == s.name; });
    out << i + 1 << ',' << s.name << ',' << to_string(spec->category) << ','
        << format_double(s.chi2) << ',' << s.dof << ',' << (s.degenerate ? 1 : 0)
        << '\n';
  }
  write_file_atomic(output_or(config, config.report_dir / "feature_ranking.csv"),
                    out.str());
}

void cmd_kstest(const PipelineConfig& config) {
  const Dataset d = load_labeled(config);
  const auto rows = metadata_ks_report(d.labeled.profiles, d.labeled.labels);
  std::ostringstream out;
  out << csv_meta_line(config)
      << "field,class_a,class_b,n1,n2,d_statistic,p_value,significant_at_0.01\n";
  for (const KsRow& r : rows) {
    out << r.field << ',' << label_name(r.class_a) << ',' << label_name(r.class_b)
        << ',' << r.result.n1 << ',' << r.result.n2 << ','
        << format_double(r.result.d_statistic) << ','
        << format_double(r.result.p_value) << ',' << (r.significant ? 1 : 0) << '\n';
  }
  write_file_atomic(output_or(config, config.report_dir / "kstest.csv"), out.str());

  std::ostringstream ecdf;
  ecdf << csv_meta_line(config) << "field,label,value,ecdf\n";
  for (const EcdfPoint& p : metadata_ecdf(d.labeled.profiles, d.labeled.labels)) {
    ecdf << p.field << ',' << label_name(p.label) << ',' << format_double(p.value)
         << ',' << format_double(p.cumulative) << '\n';
  }
  write_file_atomic(config.report_dir / "ecdf.csv", ecdf.str());
}

}  // namespace idclass
