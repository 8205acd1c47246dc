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

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "idclass/io.hpp"
#include "idclass/random.hpp"
#include "idclass/serialize.hpp"
#include "idclass/synth.hpp"

namespace idclass {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / ("idclass_" + name + "_" +
                                           std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

int run_cli(const std::string& args, const fs::path& stderr_file = "/dev/null") {
  const std::string cmd = std::string(IDCLASS_CLI) + " " + args + " 2>" + stderr_file.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> data_lines(const fs::path& file) {
  std::ifstream in(file);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

TEST(SynthTest, ProportionsAndDeterminism) {
  const SynthSpec spec = default_synth_spec();
  const SynthData a = synth_generate(spec, 2000, 7);
  ASSERT_EQ(a.labels.size(), 2000u);
  std::vector<int> counts(4, 0);
  for (const auto& [id, k] : a.labels) ++counts[static_cast<std::size_t>(k)];
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(counts[static_cast<std::size_t>(k)] / 2000.0,
                spec.classes[static_cast<std::size_t>(k)].proportion, 0.02);
  }
  const SynthData b = synth_generate(spec, 2000, 7);
  EXPECT_EQ(a.tweets, b.tweets);
  EXPECT_EQ(a.labels, b.labels);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const SynthData c = synth_generate(spec, 2000, seed);
    std::vector<int> cc(4, 0);
    for (const auto& [id, k] : c.labels) ++cc[static_cast<std::size_t>(k)];
    for (int v : cc) EXPECT_GT(v, 0);
  }
}

TEST(SynthTest, RecordsSatisfyInvariantsAndRoundTrip) {
  const SynthData d = synth_generate(default_synth_spec(), 300, 11);
  for (const TweetRecord& r : d.tweets) {
    EXPECT_GE(r.created_at, r.user.created_at);
    EXPECT_GE(r.user.observed_at, r.user.created_at);
    EXPECT_EQ(parse_tweet_line(format_tweet_line(r)), r);
  }
}

TEST(SynthTest, InvalidSpec) {
  SynthSpec spec = default_synth_spec();
  for (std::size_t k = 0; k < spec.classes.size(); ++k) spec.classes[k].proportion = k == 0 ? 1.0 : 0.0;
  try {
    synth_generate(spec, 100, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), "InvalidSpec");
  }
  EXPECT_THROW(synth_generate(default_synth_spec(), 3, 1), Error);
}

TEST(StageSeedTest, DistinctPerStage) {
  EXPECT_NE(stage_seed(7, "train"), stage_seed(7, "embedding"));
  EXPECT_EQ(stage_seed(7, "train"), stage_seed(7, "train"));
  EXPECT_NE(stage_seed(7, "train"), stage_seed(8, "train"));
}

MulticlassModel small_model(Framework f, Matrix& X, Labels& y) {
  const SynthData d = synth_generate(default_synth_spec(), 200, 5);
  const auto profiles = extract_user_profiles(d.tweets);
  const LabeledDataset ds = join_labels(profiles, d.labels);
  SkipGramParams sp;
  sp.dim = 8;
  const EmbeddingModel emb = train_embedding(profiles, sp, 1);
  X = featurize(ds.profiles, emb);
  y = ds.labels;
  GbdtParams p;
  p.n_estimators = 15;
  return train_framework(f, X, y, p, 3);
}

TEST(ModelPersistenceTest, RoundTripIsBitExact) {
  for (auto f : {Framework::kSingle, Framework::kOva, Framework::kOvo}) {
    Matrix X;
    Labels y;
    const MulticlassModel m = small_model(f, X, y);
    const MulticlassModel r = load_model(save_model(m));
    EXPECT_EQ(r.framework, f);
    EXPECT_EQ(r.class_names, m.class_names);
    EXPECT_EQ(r.learners.size(), m.learners.size());
    Rng rng(99);
    for (int i = 0; i < 1000; ++i) {
      Vector x(X.cols());
      for (Index j = 0; j < x.size(); ++j) x(j) = X(static_cast<Index>(rng.below(X.rows())), j) * rng.uniform(0.5, 1.5);
      const Prediction a = predict(m, x);
      const Prediction b = predict(r, x);
      ASSERT_EQ(a.label, b.label);
      ASSERT_EQ(std::memcmp(a.scores.data(), b.scores.data(), sizeof(double) * a.scores.size()), 0);
    }
  }
}

TEST(ModelPersistenceTest, CorruptFiles) {
  Matrix X;
  Labels y;
  const std::string text = save_model(small_model(Framework::kOva, X, y));
  auto failure = [](std::string_view s) -> std::pair<std::string, std::string> {
    try {
      load_model(s);
    } catch (const Error& e) {
      return {std::string(e.category()), e.what()};
    }
    return {"none", ""};
  };
  EXPECT_EQ(failure(text.substr(0, text.size() - 10)).first, "CorruptModel");
  EXPECT_EQ(failure("").first, "CorruptModel");
  auto doc = nlohmann::json::parse(text);
  doc["version"] = 2;
  const auto future = failure(doc.dump());
  EXPECT_EQ(future.first, "CorruptModel");
  EXPECT_NE(future.second.find("version 2"), std::string::npos);
  doc = nlohmann::json::parse(text);
  doc["format"] = "something-else";
  EXPECT_EQ(failure(doc.dump()).first, "CorruptModel");
  std::string nonfinite = text;
  const auto pos = nonfinite.find("\"threshold\":");
  ASSERT_NE(pos, std::string::npos);
  nonfinite.insert(pos + 12, "1e999,\"x\":");
  EXPECT_EQ(failure(nonfinite).first, "CorruptModel");
}

TEST(LabelsTest, ParsingAndErrors) {
  TempDir dir("labels");
  const fs::path f = dir.path() / "labels.csv";
  write_file_atomic(f, "# meta\nuser_id,label\n1,organization\n2,none\n");
  EXPECT_EQ(read_labels(f), (std::vector<std::pair<std::string, Label>>{{"1", 0}, {"2", 3}}));
  write_file_atomic(f, "user_id,label\n1,robot\n");
  EXPECT_THROW(read_labels(f), Error);
  write_file_atomic(f, "user_id,label\n1,none\n1,none\n");
  EXPECT_THROW(read_labels(f), Error);
}

TEST(ConfigTest, HashTracksConfig) {
  PipelineConfig a;
  PipelineConfig b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.seed = 8;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_NE(csv_meta_line(a).find("seed=7"), std::string::npos);
}

class EndToEndTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("e2e");
    ASSERT_EQ(run_cli("synth --n 400 --seed 3 --output " + dir_->path().string()), 0);
    ASSERT_EQ(run_cli("train --input " + (dir_->path() / "tweets.jsonl").string() +
                      " --labels " + (dir_->path() / "labels.csv").string() +
                      " --model-dir " + (dir_->path() / "model").string() +
                      " --framework ovo --estimators 40 --embedding-dim 10"),
              0);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static fs::path p(const std::string& name) { return dir_->path() / name; }
  static TempDir* dir_;
};

TempDir* EndToEndTest::dir_ = nullptr;

TEST_F(EndToEndTest, TrainThenPredictAgreesWithLabels) {
  ASSERT_EQ(run_cli("predict --input " + p("tweets.jsonl").string() + " --model-dir " +
                    p("model").string() + " --output " + p("pred.csv").string()),
            0);
  std::unordered_map<std::string, std::string> truth;
  for (const auto& line : data_lines(p("labels.csv"))) {
    const auto f = csv_split(line);
    truth[f[0]] = f[1];
  }
  const auto rows = data_lines(p("pred.csv"));
  ASSERT_GT(rows.size(), 1u);
  EXPECT_EQ(rows[0].rfind("user_id,tweet_id,class,score_organization", 0), 0u);
  std::size_t agree = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = csv_split(rows[i]);
    agree += truth.at(f[0]) == f[2];
  }
  EXPECT_GE(static_cast<double>(agree) / static_cast<double>(rows.size() - 1), 0.99);

  const auto meta = nlohmann::json::parse(read_file(p("model/classifier.json")))["meta"];
  EXPECT_EQ(meta["base_learners"], 6);
  EXPECT_EQ(meta["seed"], 7);
  EXPECT_EQ(meta["config_hash"].get<std::string>().size(), 16u);
}

TEST_F(EndToEndTest, PredictOnEmptyInputWritesHeaderOnly) {
  write_file_atomic(p("empty.jsonl"), "");
  ASSERT_EQ(run_cli("predict --input " + p("empty.jsonl").string() + " --model-dir " +
                    p("model").string() + " --output " + p("empty.csv").string()),
            0);
  const auto rows = data_lines(p("empty.csv"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], "user_id,tweet_id,class,score_organization,score_organization_affiliated,"
                     "score_non_affiliated,score_none");
}

TEST_F(EndToEndTest, EvaluateOvoReportsSixLearners) {
  ASSERT_EQ(run_cli("evaluate --input " + p("tweets.jsonl").string() + " --labels " +
                    p("labels.csv").string() + " --report-dir " + p("eval").string() +
                    " --framework ovo --estimators 10 --folds 3 --embedding-dim 8 >/dev/null"),
            0);
  const auto doc = nlohmann::json::parse(read_file(p("eval/evaluation.json")));
  EXPECT_EQ(doc["reports"][0]["base_learners"], 6);
  EXPECT_EQ(doc["meta"]["seed"], 7);
  const auto& agg = doc["reports"][0]["aggregate"];
  EXPECT_DOUBLE_EQ(agg["micro_f1_all"].get<double>(), agg["accuracy"].get<double>());
}

TEST_F(EndToEndTest, AnalysisCommandsWriteSelfDescribingFiles) {
  const std::string common = " --input " + p("tweets.jsonl").string() + " --labels " +
                             p("labels.csv").string() + " --report-dir " +
                             p("reports").string();
  ASSERT_EQ(run_cli("analyze" + common), 0);
  ASSERT_EQ(run_cli("rank-features" + common + " --model-dir " + p("model").string()), 0);
  ASSERT_EQ(run_cli("kstest" + common), 0);
  for (const char* f : {"label_distribution.csv", "content_practice.csv", "feature_ranking.csv",
                        "kstest.csv", "ecdf.csv"}) {
    const std::string text = read_file(p("reports") / f);
    EXPECT_EQ(text.rfind("# idclass format_version=1 seed=7 config_hash=", 0), 0u) << f;
  }
  EXPECT_EQ(data_lines(p("reports/feature_ranking.csv")).size(), 16u);
  EXPECT_EQ(data_lines(p("reports/kstest.csv"))[0],
            "field,class_a,class_b,n1,n2,d_statistic,p_value,significant_at_0.01");
  const auto analysis = nlohmann::json::parse(read_file(p("reports/analysis.json")));
  EXPECT_EQ(analysis["classes"].size(), 4u);

  ASSERT_EQ(run_cli("predict --input " + p("tweets.jsonl").string() + " --model-dir " +
                    p("model").string() + " --output " + p("p2.csv").string()),
            0);
  ASSERT_EQ(run_cli("analyze --input " + p("tweets.jsonl").string() + " --predictions " +
                    p("p2.csv").string() + " --report-dir " + p("from_pred").string()),
            0);
  EXPECT_EQ(nlohmann::json::parse(read_file(p("from_pred/analysis.json")))["class_source"],
            "predictions");
}

TEST_F(EndToEndTest, FilterWritesSidecarCounters) {
  ASSERT_EQ(run_cli(std::string("filter --input ") + IDCLASS_TEST_DATA +
                    "/fixture_tweets.jsonl --keywords " + IDCLASS_TEST_DATA +
                    "/fixture_keywords.txt --output " + p("filtered.jsonl").string()),
            0);
  EXPECT_EQ(data_lines(p("filtered.jsonl")).size(), 8u);
  const auto meta = nlohmann::json::parse(read_file(p("filtered.jsonl.meta.json")));
  EXPECT_EQ(meta["counters"]["read"], 20);
  EXPECT_EQ(meta["counters"]["matched"], 8);
  EXPECT_EQ(meta["counters"]["malformed"], 3);
}

TEST_F(EndToEndTest, ErrorsAreOneLineWithCategory) {
  const fs::path err = p("err.txt");
  EXPECT_NE(run_cli("predict --input " + p("tweets.jsonl").string() + " --model-dir " +
                        p("missing").string(),
                    err),
            0);
  EXPECT_EQ(read_file(err).rfind("error: IoError: ", 0), 0u) << read_file(err);
  write_file_atomic(p("bad_model/classifier.json"), "{\"format\":\"idclass-model\"");
  fs::copy_file(p("model/embedding.json"), p("bad_model/embedding.json"));
  EXPECT_NE(run_cli("predict --input " + p("tweets.jsonl").string() + " --model-dir " +
                        p("bad_model").string(),
                    err),
            0);
  EXPECT_EQ(read_file(err).rfind("error: CorruptModel: ", 0), 0u) << read_file(err);
  EXPECT_NE(run_cli("evaluate --input x --labels y --folds 1", err), 0);
  EXPECT_NE(run_cli("train --input x --labels y --framework ecoc", err), 0);
  EXPECT_EQ(read_file(err).rfind("error: InvalidParams: ", 0), 0u) << read_file(err);
}

long peak_rss_kb() {
  std::ifstream status("/proc/self/status");
  for (std::string line; std::getline(status, line);) {
    if (line.rfind("VmHWM:", 0) == 0) return std::stol(line.substr(6));
  }
  return -1;
}

// A stream that synthesizes `count` JSONL lines on demand, so input size
// never occupies memory.
class GeneratedLines : public std::streambuf {
 public:
  GeneratedLines(std::vector<std::string> templates, std::size_t count)
      : templates_(std::move(templates)), remaining_(count) {}

 protected:
  int_type underflow() override {
    if (remaining_ == 0) return traits_type::eof();
    --remaining_;
    current_ = templates_[remaining_ % templates_.size()] + "\n";
    setg(current_.data(), current_.data(), current_.data() + current_.size());
    return traits_type::to_int_type(current_[0]);
  }

 private:
  std::vector<std::string> templates_;
  std::size_t remaining_;
  std::string current_;
};

class CountingSink : public std::streambuf {
 public:
  std::size_t newlines = 0;

 protected:
  int_type overflow(int_type c) override {
    if (c == '\n') ++newlines;
    return c;
  }
  std::streamsize xsputn(const char* s, std::streamsize n) override {
    newlines += static_cast<std::size_t>(std::count(s, s + n, '\n'));
    return n;
  }
};

TEST_F(EndToEndTest, StreamingPredictMemoryIsBounded) {
  const EmbeddingModel emb = embedding_from_json(read_file(p("model/embedding.json")));
  const MulticlassModel model = load_model(read_file(p("model/classifier.json")));
  std::vector<std::string> templates;
  std::ifstream in(p("tweets.jsonl"));
  for (std::string line; std::getline(in, line) && templates.size() < 50;) templates.push_back(line);
  PipelineConfig config;

  auto run = [&](std::size_t lines) {
    GeneratedLines src(templates, lines);
    std::istream is(&src);
    CountingSink sink;
    std::ostream os(&sink);
    const std::size_t rows = predict_stream(is, os, emb, model, config);
    EXPECT_EQ(rows, lines);
    EXPECT_EQ(sink.newlines, lines + 2);
  };
  run(20'000);
  const long before = peak_rss_kb();
  run(1'000'000);
  const long after = peak_rss_kb();
  ASSERT_GT(before, 0);
  // A million rows of output would be ~100 MB if retained.
  EXPECT_LT(after - before, 8 * 1024) << "peak RSS grew from " << before << " kB to " << after << " kB";
}

}  // namespace
}  // namespace idclass
