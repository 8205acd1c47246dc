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

#ifndef IDCLASS_IO_HPP_
#define IDCLASS_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace idclass {

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

/// Fixed-point with `digits` decimals (report tables).
std::string format_fixed(double value, int digits);

std::string csv_escape(std::string_view field);

/// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> csv_split(std::string_view line);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace idclass

#endif  // IDCLASS_IO_HPP_
