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

#ifndef IDCLASS_PIPELINE_HPP_
#define IDCLASS_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "idclass/embedding.hpp"
#include "idclass/evaluation.hpp"
#include "idclass/features.hpp"
#include "idclass/gbdt.hpp"
#include "idclass/ingestion.hpp"
#include "idclass/multiclass.hpp"

namespace idclass {

inline constexpr int kArtifactFormatVersion = 1;

struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path keywords;
  std::filesystem::path labels;
  std::filesystem::path predictions;  // analyze: class source instead of labels
  std::filesystem::path model_dir = "model";
  std::filesystem::path report_dir = "reports";
  std::filesystem::path output;  // "-" means stdout where supported
  Framework framework = Framework::kOva;
  FeatureCategory features = FeatureCategory::kAll;
  GbdtParams gbdt;
  SkipGramParams embedding;
  int folds = 10;
  int bins = 10;
  int synth_n = 2000;
  bool grid = false;
  bool per_fold_embedding = false;
  std::uint64_t seed = 7;
};

nlohmann::json config_json(const PipelineConfig& config);
/// FNV-1a 64 of the canonical config JSON, as 16 hex digits.
std::string config_hash(const PipelineConfig& config);
/// {"format_version", "seed", "config_hash", "config"}.
nlohmann::json artifact_meta(const PipelineConfig& config);
/// One-line CSV comment carrying the same information.
std::string csv_meta_line(const PipelineConfig& config);

/// Reads every record from a JSONL file, counting malformed lines.
std::vector<TweetRecord> read_records(const std::filesystem::path& path,
                                      StreamStats* stats = nullptr);

/// Labels CSV ("user_id,label"); '#' lines are skipped. Throws
/// "InvalidLabels" on unknown labels or duplicate ids.
std::vector<std::pair<std::string, Label>> read_labels(
    const std::filesystem::path& path);

/// Predictions CSV as written by cmd_predict (the last row per user wins).
std::unordered_map<std::string, Label> read_prediction_classes(
    const std::filesystem::path& path);

struct LabeledDataset {
  std::vector<UserProfile> profiles;
  Labels labels;
  std::size_t unresolved = 0;  // labeled ids with no profile in the input
};

/// Joins labels against profiles, in label-file order.
LabeledDataset join_labels(std::span<const UserProfile> profiles,
                           std::span<const std::pair<std::string, Label>> labels);

std::vector<std::vector<std::string>> bio_corpus(
    std::span<const UserProfile> profiles);

/// 15-column feature matrix, one row per profile.
Matrix featurize(std::span<const UserProfile> profiles,
                 const EmbeddingModel& embedding);

EmbeddingModel train_embedding(std::span<const UserProfile> profiles,
                               const SkipGramParams& params, std::uint64_t seed);

// Subcommands. Each is a deterministic function of (inputs, config).
StreamStats cmd_filter(const PipelineConfig& config);
void cmd_synth(const PipelineConfig& config);
void cmd_embed(const PipelineConfig& config);
void cmd_featurize(const PipelineConfig& config);
void cmd_train(const PipelineConfig& config);
std::vector<CvReport> cmd_evaluate(const PipelineConfig& config);
std::size_t cmd_predict(const PipelineConfig& config);
/// Streaming core of cmd_predict; returns rows written.
std::size_t predict_stream(std::istream& in, std::ostream& out,
                           const EmbeddingModel& embedding,
                           const MulticlassModel& model,
                           const PipelineConfig& config);
void cmd_analyze(const PipelineConfig& config);
void cmd_rank_features(const PipelineConfig& config);
void cmd_kstest(const PipelineConfig& config);

}  // namespace idclass

#endif  // IDCLASS_PIPELINE_HPP_
