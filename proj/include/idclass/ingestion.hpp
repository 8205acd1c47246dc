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

#ifndef IDCLASS_INGESTION_HPP_
#define IDCLASS_INGESTION_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idclass/text.hpp"
#include "idclass/types.hpp"

namespace idclass {

/// Profile-metadata snapshot of one account at collection time. Timestamps
/// are UTC epoch seconds.
struct UserProfile {
  std::string user_id;
  std::string screen_name;
  std::string bio;
  std::int64_t created_at = 0;
  std::int64_t observed_at = 0;
  std::uint64_t friends_count = 0;
  std::uint64_t followers_count = 0;
  std::uint64_t statuses_count = 0;
  std::uint64_t favourites_count = 0;
  std::uint64_t listed_count = 0;
  bool profile_url_present = false;

  bool operator==(const UserProfile&) const = default;
};

struct TweetRecord {
  std::string tweet_id;
  std::string text;
  std::int64_t created_at = 0;
  UserProfile user;

  bool operator==(const TweetRecord&) const = default;
};

class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line_number, const std::string& reason)
      : Error("MalformedLine",
              "line " + std::to_string(line_number) + ": " + reason),
        line_number_(line_number) {}

  std::size_t line_number() const noexcept { return line_number_; }

 private:
  std::size_t line_number_;
};

/// Parses one JSON object line. Absent counts default to 0 and an absent
/// `observed_at` defaults to the tweet's `created_at`. Throws MalformedLine.
TweetRecord parse_tweet_line(std::string_view line, std::size_t line_number = 1);

/// Inverse of parse_tweet_line (one line, no trailing newline).
std::string format_tweet_line(const TweetRecord& record);

/// Shared tokenizer for track filtering and bio preprocessing.
inline std::vector<std::string> tokenize_text(std::string_view text) {
  return text::tokenize(text);
}

/// Track terms: OR across terms, AND across the tokens of one term.
class KeywordSet {
 public:
  KeywordSet() = default;

  /// Each line is tokenized into one term. Blank lines and comment lines
  /// ('#' followed by whitespace or end of line) are skipped; duplicate terms
  /// keep their first occurrence.
  static KeywordSet from_lines(std::span<const std::string> lines);
  static KeywordSet read(std::istream& in);

  void add_term(std::vector<std::string> tokens);

  const std::vector<std::vector<std::string>>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

 private:
  std::vector<std::vector<std::string>> terms_;
};

bool matches_keywords(std::string_view text, const KeywordSet& keywords);

/// Same as above over an already tokenized text.
bool matches_tokens(std::span<const std::string> text_tokens,
                    const KeywordSet& keywords);

struct StreamStats {
  std::size_t read = 0;
  std::size_t matched = 0;
  std::size_t malformed = 0;

  bool operator==(const StreamStats&) const = default;
};

using RecordSink =
    std::function<void(const TweetRecord& record, std::string_view raw_line)>;
using MalformedSink = std::function<void(const MalformedLine&)>;

/// Single pass over a JSONL stream: parses each non-blank line, emits records
/// whose text matches `keywords`, counts and skips malformed lines.
StreamStats stream_filter(std::istream& in, const KeywordSet& keywords,
                          const RecordSink& emit,
                          const MalformedSink& on_malformed = {});

/// Like stream_filter without the keyword test (every parsed line matches).
StreamStats stream_records(std::istream& in, const RecordSink& emit,
                           const MalformedSink& on_malformed = {});

/// Deduplicates by user_id keeping the snapshot from the record with the
/// latest created_at (ties: the later record). Output is ordered by first
/// appearance.
std::vector<UserProfile> extract_user_profiles(
    std::span<const TweetRecord> records);

}  // namespace idclass

#endif  // IDCLASS_INGESTION_HPP_
