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

#ifndef IDCLASS_SERIALIZE_HPP_
#define IDCLASS_SERIALIZE_HPP_

#include <string_view>

#include "json.hpp"
#include "idclass/evaluation.hpp"
#include "idclass/gbdt.hpp"
#include "idclass/multiclass.hpp"

namespace idclass {

inline constexpr std::string_view kModelFormat = "idclass-model";
inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const GbdtParams& params);
GbdtParams gbdt_params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RegressionTree& tree);
nlohmann::json to_json(const BoostedModel& model);
nlohmann::json to_json(const MulticlassModel& model);

/// All loaders throw Error "CorruptModel" on a bad tag, a future version,
/// inconsistent shapes, out-of-range feature indices, or non-finite values.
RegressionTree tree_from_json(const nlohmann::json& j, int num_features);
BoostedModel boosted_model_from_json(const nlohmann::json& j);
MulticlassModel multiclass_model_from_json(const nlohmann::json& j);

/// Full model bundle document with format tag and version; `meta` is stored
/// verbatim.
std::string save_model(const MulticlassModel& model,
                       const nlohmann::json& meta = nlohmann::json::object());
MulticlassModel load_model(std::string_view text);

nlohmann::json to_json(const Metrics& metrics,
                       std::span<const std::string> class_names);
nlohmann::json to_json(const CvReport& report,
                       std::span<const std::string> class_names);

}  // namespace idclass

#endif  // IDCLASS_SERIALIZE_HPP_
