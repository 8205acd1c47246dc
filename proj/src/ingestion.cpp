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

#include "idclass/ingestion.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <unordered_map>

#include "json.hpp"

namespace idclass {
namespace {

using nlohmann::json;

std::string required_id(const json& obj, const char* key,
                        std::size_t line_number, const char* what) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw MalformedLine(line_number, std::string("missing ") + what);
  }
  std::string id;
  if (it->is_string()) {
    id = it->get<std::string>();
  } else if (it->is_number_unsigned() || it->is_number_integer()) {
    id = it->dump();
  } else {
    throw MalformedLine(line_number, std::string(what) + " is not a string");
  }
  if (id.empty()) throw MalformedLine(line_number, std::string("empty ") + what);
  return id;
}

std::int64_t required_time(const json& obj, const char* key,
                           std::size_t line_number, const char* what) {
  auto it = obj.find(key);
  if (it == obj.end() || !(it->is_number_integer())) {
    throw MalformedLine(line_number,
                        std::string(what) + " missing or not an integer");
  }
  return it->get<std::int64_t>();
}

std::uint64_t optional_count(const json& obj, const char* key,
                             std::size_t line_number) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return 0;
  if (it->is_number_unsigned()) return it->get<std::uint64_t>();
  if (it->is_number_integer()) {
    throw MalformedLine(line_number, std::string(key) + " is negative");
  }
  throw MalformedLine(line_number, std::string(key) + " is not an integer");
}

std::string optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

}  // namespace

TweetRecord parse_tweet_line(std::string_view line, std::size_t line_number) {
  const json doc = json::parse(line.begin(), line.end(), nullptr,
                               /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw MalformedLine(line_number, "invalid JSON");
  if (!doc.is_object()) throw MalformedLine(line_number, "not a JSON object");

  TweetRecord rec;
  rec.tweet_id = required_id(doc, "id", line_number, "tweet id");
  auto text = doc.find("text");
  if (text == doc.end() || !text->is_string()) {
    throw MalformedLine(line_number, "missing text");
  }
  rec.text = text->get<std::string>();
  rec.created_at = required_time(doc, "created_at", line_number, "created_at");

  auto user_it = doc.find("user");
  if (user_it == doc.end() || !user_it->is_object()) {
    throw MalformedLine(line_number, "missing user object");
  }
  const json& user = *user_it;
  UserProfile& p = rec.user;
  p.user_id = required_id(user, "id", line_number, "user id");
  p.screen_name = optional_string(user, "screen_name");
  p.bio = optional_string(user, "description");
  p.created_at =
      required_time(user, "created_at", line_number, "user created_at");
  p.friends_count = optional_count(user, "friends_count", line_number);
  p.followers_count = optional_count(user, "followers_count", line_number);
  p.statuses_count = optional_count(user, "statuses_count", line_number);
  p.favourites_count = optional_count(user, "favourites_count", line_number);
  p.listed_count = optional_count(user, "listed_count", line_number);
  p.profile_url_present = !optional_string(user, "url").empty();

  auto observed = doc.find("observed_at");
  if (observed == doc.end() || observed->is_null()) {
    p.observed_at = rec.created_at;
  } else if (observed->is_number_integer()) {
    p.observed_at = observed->get<std::int64_t>();
  } else {
    throw MalformedLine(line_number, "observed_at is not an integer");
  }

  if (rec.created_at < p.created_at) {
    throw MalformedLine(line_number, "tweet predates its author's account");
  }
  if (p.observed_at < p.created_at) {
    throw MalformedLine(line_number, "observed_at predates account creation");
  }
  return rec;
}

std::string format_tweet_line(const TweetRecord& r) {
  const UserProfile& p = r.user;
  json user = {
      {"id", p.user_id},
      {"screen_name", p.screen_name},
      {"description", p.bio},
      {"created_at", p.created_at},
      {"friends_count", p.friends_count},
      {"followers_count", p.followers_count},
      {"statuses_count", p.statuses_count},
      {"favourites_count", p.favourites_count},
      {"listed_count", p.listed_count},
  };
  // The boolean has no source URL to round-trip, so a placeholder is written.
  user["url"] = p.profile_url_present ? json("https://example.org/") : json();
  json doc = {{"id", r.tweet_id},
              {"text", r.text},
              {"created_at", r.created_at},
              {"user", std::move(user)}};
  if (p.observed_at != r.created_at) doc["observed_at"] = p.observed_at;
  return doc.dump(-1, ' ', false, json::error_handler_t::replace);
}

KeywordSet KeywordSet::from_lines(std::span<const std::string> lines) {
  KeywordSet set;
  for (const std::string& raw : lines) {
    std::string_view line = raw;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line.remove_prefix(first);
    if (line[0] == '#' &&
        (line.size() == 1 || line[1] == ' ' || line[1] == '\t' ||
         line[1] == '#' || line[1] == '\r')) {
      continue;
    }
    set.add_term(tokenize_text(line));
  }
  return set;
}

KeywordSet KeywordSet::read(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return from_lines(lines);
}

void KeywordSet::add_term(std::vector<std::string> tokens) {
  std::vector<std::string> term;
  for (auto& t : tokens) {
    t = text::to_lower(t);
    if (t.empty()) continue;
    if (std::find(term.begin(), term.end(), t) == term.end()) {
      term.push_back(std::move(t));
    }
  }
  if (term.empty()) return;
  if (std::find(terms_.begin(), terms_.end(), term) != terms_.end()) return;
  terms_.push_back(std::move(term));
}

bool matches_tokens(std::span<const std::string> text_tokens,
                    const KeywordSet& keywords) {
  auto has = [&](const std::string& want) {
    for (const std::string& tok : text_tokens) {
      if (tok == want) return true;
      if (tok.size() == want.size() + 1 && tok[0] == '#' &&
          std::string_view(tok).substr(1) == want) {
        return true;
      }
    }
    return false;
  };
  for (const auto& term : keywords.terms()) {
    if (std::all_of(term.begin(), term.end(), has)) return true;
  }
  return false;
}

bool matches_keywords(std::string_view text, const KeywordSet& keywords) {
  if (keywords.empty()) return false;
  return matches_tokens(tokenize_text(text), keywords);
}

namespace {

template <typename Predicate>
StreamStats scan(std::istream& in, Predicate&& keep, const RecordSink& emit,
                 const MalformedSink& on_malformed) {
  StreamStats stats;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++stats.read;
    TweetRecord record;
    try {
      record = parse_tweet_line(line, line_number);
    } catch (const MalformedLine& e) {
      ++stats.malformed;
      if (on_malformed) on_malformed(e);
      continue;
    }
    if (!keep(record)) continue;
    ++stats.matched;
    if (emit) emit(record, line);
  }
  return stats;
}

}  // namespace

StreamStats stream_filter(std::istream& in, const KeywordSet& keywords,
                          const RecordSink& emit,
                          const MalformedSink& on_malformed) {
  return scan(
      in,
      [&](const TweetRecord& r) { return matches_keywords(r.text, keywords); },
      emit, on_malformed);
}

StreamStats stream_records(std::istream& in, const RecordSink& emit,
                           const MalformedSink& on_malformed) {
  return scan(
      in, [](const TweetRecord&) { return true; }, emit, on_malformed);
}

std::vector<UserProfile> extract_user_profiles(
    std::span<const TweetRecord> records) {
  struct Slot {
    std::size_t output_index;
    std::int64_t created_at;
  };
  std::unordered_map<std::string, Slot> seen;
  std::vector<UserProfile> profiles;
  for (const TweetRecord& r : records) {
    auto [it, inserted] = seen.try_emplace(r.user.user_id,
                                           Slot{profiles.size(), r.created_at});
    if (inserted) {
      profiles.push_back(r.user);
    } else if (r.created_at >= it->second.created_at) {
      it->second.created_at = r.created_at;
      profiles[it->second.output_index] = r.user;
    }
  }
  return profiles;
}

}  // namespace idclass
