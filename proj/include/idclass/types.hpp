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

#ifndef IDCLASS_TYPES_HPP_
#define IDCLASS_TYPES_HPP_

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace idclass {

// Dense types shared by every module. Rows of a design matrix are samples.
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowMatrixX =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using CountMatrix = MatrixX<std::int64_t>;
using Index = Eigen::Index;

// Class labels are dense integers 0..K-1.
using Label = int;
using Labels = std::vector<Label>;

/// Identity taxonomy. Declaration order is the canonical order used for
/// serialization and for every deterministic tie-break.
enum class IdentityClass : Label {
  kOrganization = 0,
  kOrganizationAffiliated = 1,
  kNonAffiliated = 2,
  kNone = 3,
};

inline constexpr int kNumIdentityClasses = 4;

inline constexpr std::array<std::string_view, kNumIdentityClasses>
    kIdentityClassNames = {"organization", "organization_affiliated",
                           "non_affiliated", "none"};

inline std::string_view to_string(IdentityClass c) {
  return kIdentityClassNames[static_cast<std::size_t>(c)];
}

inline std::optional<IdentityClass> parse_identity_class(std::string_view s) {
  for (std::size_t i = 0; i < kIdentityClassNames.size(); ++i) {
    if (kIdentityClassNames[i] == s) return static_cast<IdentityClass>(i);
  }
  return std::nullopt;
}

/// Base of every error the library throws. `category()` is a stable,
/// machine-parsable tag (e.g. "MalformedLine", "CorruptModel").
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& message)
      : std::runtime_error(message), category_(std::move(category)) {}

  const std::string& category() const noexcept { return category_; }

 private:
  std::string category_;
};

}  // namespace idclass

#endif  // IDCLASS_TYPES_HPP_
