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

// Command-line front end. Every subcommand maps onto one cmd_* function.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "idclass/pipeline.hpp"

namespace {

using idclass::PipelineConfig;

void add_common(CLI::App* cmd, PipelineConfig& c) {
  cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  cmd->add_option("--model-dir", c.model_dir, "Model directory")->capture_default_str();
  cmd->add_option("--report-dir", c.report_dir, "Report directory")->capture_default_str();
}

void add_input(CLI::App* cmd, PipelineConfig& c) {
  cmd->add_option("--input", c.input, "Tweet JSONL file")->required();
}

void add_embedding(CLI::App* cmd, PipelineConfig& c) {
  cmd->add_option("--embedding-dim", c.embedding.dim)->capture_default_str();
  cmd->add_option("--embedding-window", c.embedding.window)->capture_default_str();
  cmd->add_option("--embedding-negative", c.embedding.negative)->capture_default_str();
  cmd->add_option("--embedding-epochs", c.embedding.epochs)->capture_default_str();
  cmd->add_option("--embedding-min-count", c.embedding.min_count)->capture_default_str();
}

void add_model(CLI::App* cmd, PipelineConfig& c, std::string& framework,
               std::string& features) {
  cmd->add_option("--framework", framework, "single | ova | ovo")
      ->capture_default_str();
  cmd->add_option("--features", features, "social | activity | representation | all")
      ->capture_default_str();
  cmd->add_option("--estimators", c.gbdt.n_estimators)->capture_default_str();
  cmd->add_option("--learning-rate", c.gbdt.learning_rate)->capture_default_str();
  cmd->add_option("--max-depth", c.gbdt.max_depth)->capture_default_str();
  cmd->add_option("--lambda", c.gbdt.lambda)->capture_default_str();
  cmd->add_option("--gamma", c.gbdt.gamma)->capture_default_str();
  cmd->add_option("--min-samples-leaf", c.gbdt.min_samples_leaf)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity classification of social media accounts"};
  app.require_subcommand(1);
  PipelineConfig c;
  std::string framework = "ova";
  std::string features = "all";

  auto* filter = app.add_subcommand("filter", "Keyword-filter a tweet stream");
  add_input(filter, c);
  filter->add_option("--keywords", c.keywords, "Keyword file")->required();
  filter->add_option("--output", c.output, "Output JSONL ('-' for stdout)");

  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
  synth->add_option("--n", c.synth_n, "Number of users")->capture_default_str();
  synth->add_option("--output", c.output, "Output directory");
  synth->add_option("--seed", c.seed)->capture_default_str();

  auto* embed = app.add_subcommand("embed", "Train the bio embedding");
  add_input(embed, c);
  add_common(embed, c);
  add_embedding(embed, c);

  auto* featurize = app.add_subcommand("featurize", "Write the feature matrix");
  add_input(featurize, c);
  add_common(featurize, c);
  add_embedding(featurize, c);
  featurize->add_option("--output", c.output, "Output CSV");

  auto* train = app.add_subcommand("train", "Train a classifier");
  add_input(train, c);
  train->add_option("--labels", c.labels)->required();
  add_common(train, c);
  add_embedding(train, c);
  add_model(train, c, framework, features);

  auto* evaluate = app.add_subcommand("evaluate", "Stratified cross-validation");
  add_input(evaluate, c);
  evaluate->add_option("--labels", c.labels)->required();
  add_common(evaluate, c);
  add_embedding(evaluate, c);
  add_model(evaluate, c, framework, features);
  evaluate->add_option("--folds", c.folds)->capture_default_str();
  evaluate->add_flag("--grid", c.grid, "All frameworks x feature categories");
  evaluate->add_flag("--per-fold-embedding", c.per_fold_embedding,
                     "Retrain the embedding inside each fold");

  auto* predict = app.add_subcommand("predict", "Classify every record");
  add_input(predict, c);
  add_common(predict, c);
  predict->add_option("--output", c.output, "Output CSV ('-' for stdout)");

  auto* analyze = app.add_subcommand("analyze", "Label distribution and content practice");
  add_input(analyze, c);
  add_common(analyze, c);
  auto* labels_opt = analyze->add_option("--labels", c.labels);
  auto* preds_opt = analyze->add_option("--predictions", c.predictions);
  labels_opt->excludes(preds_opt);

  auto* rank = app.add_subcommand("rank-features", "Chi-square feature ranking");
  add_input(rank, c);
  rank->add_option("--labels", c.labels)->required();
  add_common(rank, c);
  add_embedding(rank, c);
  rank->add_option("--bins", c.bins)->capture_default_str();
  rank->add_option("--output", c.output, "Output CSV");

  auto* kstest = app.add_subcommand("kstest", "Metadata K-S tests between classes");
  add_input(kstest, c);
  kstest->add_option("--labels", c.labels)->required();
  add_common(kstest, c);
  kstest->add_option("--output", c.output, "Output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto fw = idclass::parse_framework(framework);
    if (!fw) throw idclass::Error("InvalidParams", "unknown framework '" + framework + "'");
    const auto cat = idclass::parse_feature_category(features);
    if (!cat) throw idclass::Error("InvalidParams", "unknown feature category '" + features + "'");
    c.framework = *fw;
    c.features = *cat;

    if (*filter) {
      const auto s = idclass::cmd_filter(c);
      std::cerr << "read=" << s.read << " matched=" << s.matched
                << " malformed=" << s.malformed << '\n';
    } else if (*synth) {
      idclass::cmd_synth(c);
    } else if (*embed) {
      idclass::cmd_embed(c);
    } else if (*featurize) {
      idclass::cmd_featurize(c);
    } else if (*train) {
      idclass::cmd_train(c);
    } else if (*evaluate) {
      const auto reports = idclass::cmd_evaluate(c);
      std::cout << idclass::format_results_table(reports);
    } else if (*predict) {
      const auto rows = idclass::cmd_predict(c);
      std::cerr << "predicted " << rows << " records\n";
    } else if (*analyze) {
      if (c.labels.empty() && c.predictions.empty()) {
        throw idclass::Error("MissingInput", "analyze needs --labels or --predictions");
      }
      idclass::cmd_analyze(c);
    } else if (*rank) {
      idclass::cmd_rank_features(c);
    } else if (*kstest) {
      idclass::cmd_kstest(c);
    }
  } catch (const idclass::Error& e) {
    std::cerr << "error: " << e.category() << ": " << e.what() << '\n';
    return EXIT_FAILURE;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
