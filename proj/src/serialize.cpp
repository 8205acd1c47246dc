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

#include "idclass/serialize.hpp"

#include <cmath>
#include <string>

#include "idclass/features.hpp"

namespace idclass {

using nlohmann::json;

namespace {

[[noreturn]] void corrupt(const std::string& why) {
  throw Error("CorruptModel", why);
}

double finite(const json& j, const char* what) {
  if (!j.is_number()) corrupt(std::string(what) + " is not a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) corrupt(std::string(what) + " is not finite");
  return v;
}

std::string_view objective_name(Objective o) {
  return o == Objective::kSoftmax ? "softmax" : "binary_logistic";
}

std::string learner_key(const MulticlassModel& m, std::size_t index) {
  switch (m.framework) {
    case Framework::kSingle:
      return "softmax";
    case Framework::kOva:
      return m.class_names[index];
    case Framework::kOvo: {
      const auto [a, b] = m.pairs[index];
      return m.class_names[static_cast<std::size_t>(a)] + "/" +
             m.class_names[static_cast<std::size_t>(b)];
    }
  }
  return {};
}

RegressionTree::Node leaf_node(double v) {
  RegressionTree::Node n;
  n.value = v;
  return n;
}

void read_node(const json& j, int num_features, int depth,
               std::vector<RegressionTree::Node>& nodes) {
  if (depth > 64) corrupt("tree is deeper than 64 levels");
  if (!j.is_object()) corrupt("tree node is not an object");
  const std::size_t id = nodes.size();
  if (auto leaf = j.find("leaf"); leaf != j.end()) {
    nodes.push_back(leaf_node(finite(*leaf, "leaf value")));
    return;
  }
  RegressionTree::Node split;
  split.feature = j.at("feature").get<int>();
  if (split.feature < 0 || split.feature >= num_features) {
    corrupt("split feature index out of range");
  }
  split.threshold = finite(j.at("threshold"), "split threshold");
  nodes.push_back(split);
  nodes[id].left = static_cast<int>(nodes.size());
  read_node(j.at("left"), num_features, depth + 1, nodes);
  nodes[id].right = static_cast<int>(nodes.size());
  read_node(j.at("right"), num_features, depth + 1, nodes);
}

json node_to_json(const std::vector<RegressionTree::Node>& nodes, int id) {
  const auto& n = nodes[static_cast<std::size_t>(id)];
  if (n.is_leaf()) return {{"leaf", n.value}};
  return {{"feature", n.feature},
          {"threshold", n.threshold},
          {"left", node_to_json(nodes, n.left)},
          {"right", node_to_json(nodes, n.right)}};
}

}  // namespace

json to_json(const GbdtParams& p) {
  return {{"n_estimators", p.n_estimators}, {"learning_rate", p.learning_rate},
          {"max_depth", p.max_depth},       {"lambda", p.lambda},
          {"gamma", p.gamma},               {"min_samples_leaf", p.min_samples_leaf}};
}

GbdtParams gbdt_params_from_json(const json& j) {
  GbdtParams p;
  p.n_estimators = j.at("n_estimators").get<int>();
  p.learning_rate = j.at("learning_rate").get<double>();
  p.max_depth = j.at("max_depth").get<int>();
  p.lambda = j.at("lambda").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  return p;
}

json to_json(const RegressionTree& tree) { return node_to_json(tree.nodes(), 0); }

RegressionTree tree_from_json(const json& j, int num_features) {
  std::vector<RegressionTree::Node> nodes;
  read_node(j, num_features, 0, nodes);
  return RegressionTree(std::move(nodes));
}

json to_json(const BoostedModel& m) {
  json rounds = json::array();
  for (const auto& round : m.rounds) {
    json trees = json::array();
    for (const auto& t : round) trees.push_back(to_json(t));
    rounds.push_back(std::move(trees));
  }
  return {{"objective", objective_name(m.objective)},
          {"num_classes", m.num_classes},
          {"num_features", m.num_features},
          {"base_score", std::vector<double>(m.base_score.data(),
                                             m.base_score.data() + m.base_score.size())},
          {"learning_rate", m.learning_rate},
          {"params", to_json(m.params)},
          {"trees", std::move(rounds)}};
}

BoostedModel boosted_model_from_json(const json& j) {
  try {
    BoostedModel m;
    const std::string objective = j.at("objective").get<std::string>();
    if (objective == "softmax") {
      m.objective = Objective::kSoftmax;
    } else if (objective == "binary_logistic") {
      m.objective = Objective::kBinaryLogistic;
    } else {
      corrupt("unknown objective '" + objective + "'");
    }
    m.num_classes = j.at("num_classes").get<int>();
    m.num_features = j.at("num_features").get<int>();
    if (m.num_classes < 2 || m.num_features < 0) corrupt("bad model shape");
    m.learning_rate = finite(j.at("learning_rate"), "learning rate");
    if (!(m.learning_rate > 0.0 && m.learning_rate <= 1.0)) {
      corrupt("learning rate outside (0, 1]");
    }
    m.params = gbdt_params_from_json(j.at("params"));
    const json& base = j.at("base_score");
    if (!base.is_array() || static_cast<int>(base.size()) != m.margin_size()) {
      corrupt("base_score has the wrong length");
    }
    m.base_score.resize(m.margin_size());
    for (int k = 0; k < m.margin_size(); ++k) {
      m.base_score(k) = finite(base[static_cast<std::size_t>(k)], "base score");
    }
    for (const json& round : j.at("trees")) {
      if (!round.is_array() || static_cast<int>(round.size()) != m.margin_size()) {
        corrupt("boosting round has the wrong number of trees");
      }
      std::vector<RegressionTree> trees;
      for (const json& t : round) trees.push_back(tree_from_json(t, m.num_features));
      m.rounds.push_back(std::move(trees));
    }
    return m;
  } catch (const json::exception& e) {
    corrupt(std::string("boosted model: ") + e.what());
  }
}

json to_json(const MulticlassModel& m) {
  json learners = json::array();
  for (std::size_t i = 0; i < m.learners.size(); ++i) {
    learners.push_back({{"key", learner_key(m, i)}, {"model", to_json(m.learners[i])}});
  }
  return {{"framework", to_string(m.framework)},
          {"class_names", m.class_names},
          {"features", to_string(m.category)},
          {"feature_names", m.feature_names},
          {"learners", std::move(learners)}};
}

MulticlassModel multiclass_model_from_json(const json& j) {
  try {
    MulticlassModel m;
    const auto framework = parse_framework(j.at("framework").get<std::string>());
    if (!framework) corrupt("unknown framework");
    m.framework = *framework;
    m.class_names = j.at("class_names").get<std::vector<std::string>>();
    m.num_classes = static_cast<int>(m.class_names.size());
    if (m.num_classes < 2) corrupt("fewer than two classes");
    const auto category = parse_feature_category(j.at("features").get<std::string>());
    if (!category) corrupt("unknown feature category");
    m.category = *category;
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    if (m.framework == Framework::kOvo) m.pairs = class_pairs(m.num_classes);

    const json& learners = j.at("learners");
    if (!learners.is_array() ||
        static_cast<int>(learners.size()) != learner_count(m.framework, m.num_classes)) {
      corrupt("learner count does not match framework");
    }
    for (std::size_t i = 0; i < learners.size(); ++i) {
      BoostedModel b = boosted_model_from_json(learners[i].at("model"));
      if (learners[i].at("key").get<std::string>() != learner_key(m, i)) {
        corrupt("learner key mismatch at index " + std::to_string(i));
      }
      if (b.num_features != m.num_features()) corrupt("learner feature width mismatch");
      const bool softmax = m.framework == Framework::kSingle;
      if ((b.objective == Objective::kSoftmax) != softmax ||
          (softmax && b.num_classes != m.num_classes)) {
        corrupt("learner objective does not match framework");
      }
      m.learners.push_back(std::move(b));
    }
    return m;
  } catch (const json::exception& e) {
    corrupt(std::string("multiclass model: ") + e.what());
  }
}

std::string save_model(const MulticlassModel& model, const json& meta) {
  json doc = {{"format", kModelFormat},
              {"version", kModelFormatVersion},
              {"meta", meta},
              {"model", to_json(model)}};
  return doc.dump();
}

MulticlassModel load_model(std::string_view text) {
  const json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) corrupt("model file is not valid JSON");
  auto format = doc.find("format");
  if (format == doc.end() || *format != kModelFormat) corrupt("missing model format tag");
  auto version = doc.find("version");
  if (version == doc.end() || !version->is_number_integer()) {
    corrupt("missing model format version");
  }
  if (version->get<int>() != kModelFormatVersion) {
    corrupt("unsupported model format version " + std::to_string(version->get<int>()) +
            " (supported: " + std::to_string(kModelFormatVersion) + ")");
  }
  auto model = doc.find("model");
  if (model == doc.end()) corrupt("missing model body");
  return multiclass_model_from_json(*model);
}

json to_json(const Metrics& m, std::span<const std::string> class_names) {
  json per_class = json::object();
  for (std::size_t k = 0; k < m.per_class.size(); ++k) {
    const auto& c = m.per_class[k];
    const std::string name = k < class_names.size() ? class_names[k] : std::to_string(k);
    per_class[name] = {{"precision", c.precision},
                       {"recall", c.recall},
                       {"f1", c.f1},
                       {"support", c.support}};
  }
  json confusion = json::array();
  for (Index i = 0; i < m.confusion.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.confusion.cols(); ++j) row.push_back(m.confusion(i, j));
    confusion.push_back(std::move(row));
  }
  return {{"n", m.n},
          {"accuracy", m.accuracy},
          {"micro_f1_all", m.micro_f1_all},
          {"micro_f1_relevant", m.micro_f1_relevant},
          {"macro_f1", m.macro_f1},
          {"per_class", std::move(per_class)},
          {"confusion_matrix", std::move(confusion)}};
}

json to_json(const CvReport& r, std::span<const std::string> class_names) {
  json folds = json::array();
  for (const Metrics& m : r.per_fold) folds.push_back(to_json(m, class_names));
  return {{"framework", to_string(r.framework)},
          {"features", to_string(r.category)},
          {"folds", r.num_folds},
          {"seed", r.seed},
          {"base_learners", r.learners_per_model},
          {"aggregate", to_json(r.aggregate, class_names)},
          {"mean_fold_accuracy", r.mean_fold_accuracy},
          {"std_fold_accuracy", r.std_fold_accuracy},
          {"per_fold", std::move(folds)}};
}

}  // namespace idclass
