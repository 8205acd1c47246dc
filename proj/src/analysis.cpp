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

#include "idclass/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "idclass/features.hpp"
#include "idclass/text.hpp"

namespace idclass {

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const auto n1 = static_cast<double>(sa.size());
  const auto n2 = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 -
                             static_cast<double>(j) / n2));
  }
  return d;
}

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  double q = 0.0;
  if (lambda < 1.18) {
    // Jacobi-theta form of the same distribution; the alternating series
    // needs O(1/lambda) terms here while this one converges in a few.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0.0;
    for (int k = 1; k < 100; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
      cdf += term;
      if (term < 1e-17 * cdf || term == 0.0) break;
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    q = 1.0 - cdf;
  } else {
    double sign = 1.0;
    for (int k = 1; k < 1000; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      if (term < 1e-10) break;
      q += sign * term;
      sign = -sign;
    }
    q *= 2.0;
  }
  return std::clamp(q, 0.0, 1.0);
}

double ks_p_value(double d, std::size_t n1, std::size_t n2) {
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  const double n_eff = a * b / (a + b);
  return kolmogorov_survival(std::sqrt(n_eff) * d);
}

KSResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw Error("EmptySample", "K-S test needs two non-empty samples");
  }
  KSResult r;
  r.n1 = a.size();
  r.n2 = b.size();
  r.d_statistic = ks_statistic(a, b);
  r.p_value = ks_p_value(r.d_statistic, r.n1, r.n2);
  return r;
}

std::vector<int> quantile_bins(std::span<const double> values, int bins) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  std::vector<double> cuts;
  for (int j = 1; j < bins; ++j) {
    const std::size_t rank = static_cast<std::size_t>(j) * n /
                             static_cast<std::size_t>(bins);
    if (rank < n) cuts.push_back(sorted[rank]);
  }
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<int> out;
  out.reserve(n);
  for (double v : values) {
    out.push_back(static_cast<int>(
        std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin()));
  }
  return out;
}

double chi_square_statistic(const CountMatrix& table) {
  const auto n = static_cast<double>(table.sum());
  if (n == 0.0) return 0.0;
  const Vector rows = table.rowwise().sum().cast<double>();
  const Vector cols = table.colwise().sum().transpose().cast<double>();
  double chi2 = 0.0;
  for (Index i = 0; i < table.rows(); ++i) {
    for (Index j = 0; j < table.cols(); ++j) {
      const double expected = rows(i) * cols(j) / n;
      if (expected <= 0.0) continue;
      const double diff = static_cast<double>(table(i, j)) - expected;
      chi2 += diff * diff / expected;
    }
  }
  return chi2;
}

FeatureRanking chi_square_rank(const Matrix& X, std::span<const Label> y,
                               std::span<const std::string> names, int bins) {
  if (bins < 1 || X.rows() < bins) {
    throw Error("TooFewSamples", "chi-square ranking needs rows >= bins");
  }
  if (static_cast<std::size_t>(X.rows()) != y.size() ||
      names.size() != static_cast<std::size_t>(X.cols())) {
    throw Error("LengthMismatch", "feature matrix, labels and names disagree");
  }
  std::map<Label, int> column_of;
  for (Label label : y) column_of.emplace(label, 0);
  if (column_of.size() < 2) {
    throw Error("SingleClass", "chi-square ranking needs >= 2 classes");
  }
  int next = 0;
  for (auto& [label, col] : column_of) col = next++;
  const int K = next;

  FeatureRanking ranking;
  ranking.bins = bins;
  for (Index f = 0; f < X.cols(); ++f) {
    const Vector column = X.col(f);
    const std::vector<int> bin_of = quantile_bins(
        std::span<const double>(column.data(), static_cast<std::size_t>(column.size())),
        bins);
    const int max_bin = *std::max_element(bin_of.begin(), bin_of.end());
    CountMatrix table = CountMatrix::Zero(max_bin + 1, K);
    for (std::size_t i = 0; i < bin_of.size(); ++i) {
      ++table(bin_of[i], column_of.at(y[i]));
    }
    const auto occupied = static_cast<int>(
        (table.rowwise().sum().array() > 0).count());

    FeatureScore s;
    s.name = names[static_cast<std::size_t>(f)];
    s.effective_bins = occupied;
    s.degenerate = occupied < 2;
    s.chi2 = s.degenerate ? 0.0 : chi_square_statistic(table);
    s.dof = (occupied - 1) * (K - 1);
    ranking.features.push_back(std::move(s));
  }
  std::stable_sort(
      ranking.features.begin(), ranking.features.end(),
      [](const FeatureScore& a, const FeatureScore& b) { return a.chi2 > b.chi2; });
  return ranking;
}

std::vector<double> label_distribution(std::span<const Label> labels,
                                       int num_classes) {
  if (labels.empty()) throw Error("EmptyInput", "no labels to summarize");
  std::vector<double> counts(static_cast<std::size_t>(num_classes), 0.0);
  for (Label l : labels) {
    if (l < 0 || l >= num_classes) {
      throw Error("LabelOutOfRange", "label outside 0..K-1");
    }
    counts[static_cast<std::size_t>(l)] += 1.0;
  }
  const auto n = static_cast<double>(labels.size());
  for (double& c : counts) c = 100.0 * c / n;
  return counts;
}

bool contains_url(std::string_view text) {
  return text::contains_ci(text, "http://") || text::contains_ci(text, "https://");
}

bool contains_mention(std::string_view text) {
  return informality_counts(text).mentions > 0;
}

PracticeReport content_practice_report(
    std::span<const TweetRecord> tweets,
    const std::unordered_map<std::string, Label>& class_of, int num_classes) {
  PracticeReport report;
  report.per_class.resize(static_cast<std::size_t>(num_classes));
  std::vector<std::int64_t> urls(static_cast<std::size_t>(num_classes), 0);
  std::vector<std::int64_t> mentions(static_cast<std::size_t>(num_classes), 0);
  std::vector<TweetRecord> mapped;

  for (const TweetRecord& t : tweets) {
    auto it = class_of.find(t.user.user_id);
    if (it == class_of.end() || it->second < 0 || it->second >= num_classes) {
      ++report.unmapped_tweets;
      continue;
    }
    const auto k = static_cast<std::size_t>(it->second);
    ++report.per_class[k].tweets;
    urls[k] += contains_url(t.text);
    mentions[k] += contains_mention(t.text);
    mapped.push_back(t);
  }

  std::vector<double> friends(static_cast<std::size_t>(num_classes), 0.0);
  std::vector<double> followers(static_cast<std::size_t>(num_classes), 0.0);
  std::vector<Label> user_labels;
  for (const UserProfile& p : extract_user_profiles(mapped)) {
    const Label label = class_of.at(p.user_id);
    const auto k = static_cast<std::size_t>(label);
    ++report.per_class[k].users;
    friends[k] += static_cast<double>(p.friends_count);
    followers[k] += static_cast<double>(p.followers_count);
    user_labels.push_back(label);
  }

  for (std::size_t k = 0; k < report.per_class.size(); ++k) {
    ClassPractice& c = report.per_class[k];
    if (c.tweets > 0) {
      c.url_share = static_cast<double>(urls[k]) / static_cast<double>(c.tweets);
      c.mention_share =
          static_cast<double>(mentions[k]) / static_cast<double>(c.tweets);
    }
    if (c.users > 0) {
      c.mean_friends = friends[k] / static_cast<double>(c.users);
      c.mean_followers = followers[k] / static_cast<double>(c.users);
    }
  }
  report.user_distribution =
      user_labels.empty() ? std::vector<double>(static_cast<std::size_t>(num_classes), 0.0)
                          : label_distribution(user_labels, num_classes);
  return report;
}

double profile_field(const UserProfile& p, std::string_view field) {
  if (field == "followers_count") return static_cast<double>(p.followers_count);
  if (field == "friends_count") return static_cast<double>(p.friends_count);
  if (field == "listed_count") return static_cast<double>(p.listed_count);
  if (field == "statuses_count") return static_cast<double>(p.statuses_count);
  if (field == "favourites_count") return static_cast<double>(p.favourites_count);
  throw Error("UnknownField", "unknown profile field " + std::string(field));
}

namespace {

std::vector<std::vector<double>> split_by_class(
    std::span<const UserProfile> profiles, std::span<const Label> labels,
    int num_classes, std::string_view field) {
  if (profiles.size() != labels.size()) {
    throw Error("LengthMismatch", "profiles and labels differ in length");
  }
  std::vector<std::vector<double>> groups(static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const Label l = labels[i];
    if (l < 0 || l >= num_classes) {
      throw Error("LabelOutOfRange", "label outside 0..K-1");
    }
    groups[static_cast<std::size_t>(l)].push_back(profile_field(profiles[i], field));
  }
  return groups;
}

}  // namespace

std::vector<KsRow> metadata_ks_report(std::span<const UserProfile> profiles,
                                      std::span<const Label> labels,
                                      int num_classes, double alpha) {
  std::vector<KsRow> rows;
  for (std::string_view field : kKsFields) {
    const auto groups = split_by_class(profiles, labels, num_classes, field);
    for (Label a = 0; a < num_classes; ++a) {
      for (Label b = a + 1; b < num_classes; ++b) {
        const auto& ga = groups[static_cast<std::size_t>(a)];
        const auto& gb = groups[static_cast<std::size_t>(b)];
        if (ga.empty() || gb.empty()) continue;
        KsRow row;
        row.field = std::string(field);
        row.class_a = a;
        row.class_b = b;
        row.result = ks_two_sample(ga, gb);
        row.significant = row.result.p_value < alpha;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<EcdfPoint> metadata_ecdf(std::span<const UserProfile> profiles,
                                     std::span<const Label> labels,
                                     int num_classes) {
  std::vector<EcdfPoint> points;
  for (std::string_view field : kKsFields) {
    auto groups = split_by_class(profiles, labels, num_classes, field);
    for (Label k = 0; k < num_classes; ++k) {
      auto& g = groups[static_cast<std::size_t>(k)];
      std::sort(g.begin(), g.end());
      const auto n = static_cast<double>(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (i + 1 < g.size() && g[i + 1] == g[i]) continue;
        points.push_back({std::string(field), k, g[i],
                          static_cast<double>(i + 1) / n});
      }
    }
  }
  return points;
}

}  // namespace idclass
