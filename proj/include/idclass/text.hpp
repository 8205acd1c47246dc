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

#ifndef IDCLASS_TEXT_HPP_
#define IDCLASS_TEXT_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace idclass::text {

inline constexpr char32_t kReplacementChar = 0xFFFD;

/// Decodes one UTF-8 code point starting at `pos` and advances `pos`.
/// Invalid or truncated sequences consume one byte and yield U+FFFD.
char32_t decode_utf8(std::string_view s, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

// Letter/digit classification. ASCII and Latin-1 are exact; above that,
// punctuation, symbol, emoji, and format blocks are treated as separators
// and every other code point as a letter.
bool is_alnum(char32_t cp);

/// is_alnum plus '_', the character class tokens are built from.
inline bool is_word(char32_t cp) { return cp == U'_' || is_alnum(cp); }

/// Simple case folding for ASCII, Latin-1, Latin Extended-A, basic Greek and
/// Cyrillic. Other code points are returned unchanged.
char32_t to_lower(char32_t cp);

std::string to_lower(std::string_view s);

/// Splits on non-word boundaries and lowercases. A '#' or '@' directly
/// followed by a word character is kept as the first byte of that token.
std::vector<std::string> tokenize(std::string_view text);

/// Case-insensitive ASCII substring search.
bool contains_ci(std::string_view haystack, std::string_view needle);

}  // namespace idclass::text

#endif  // IDCLASS_TEXT_HPP_
