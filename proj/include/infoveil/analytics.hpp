// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "infoveil/corpus.hpp"
#include "infoveil/gazetteer.hpp"
#include "infoveil/index.hpp"
#include "infoveil/ingest/links.hpp"

namespace infoveil::analytics {

struct TrendPoint {
  TimeBucket bucket;
  std::size_t docs_with_term = 0;
  std::size_t docs_total = 0;
  double normalized = 0.0;

  bool operator==(const TrendPoint&) const = default;
};

struct TrendSeries {
  std::string term;
  Scope scope;
  Granularity granularity = Granularity::month;
  std::vector<TrendPoint> points;

  bool operator==(const TrendSeries&) const = default;
};

namespace detail {

inline std::vector<TrendPoint> zero_series(Timestamp from, Timestamp to, Granularity g) {
  std::vector<TrendPoint> points;
  for (auto b = bucket_of(from, g), last = bucket_of(to, g); b <= last; b = b.next()) points.push_back({b, 0, 0, 0.0});
  return points;
}

inline void fill_series(const TermIndex& index, std::string_view term, const TermIndex::ResolvedScope& rs,
                        std::vector<TrendPoint>& points) {
  if (points.empty()) return;
  auto g = points.front().bucket.granularity;
  std::map<Date, std::size_t> hits;
  if (auto t = index.term_id(term)) {
    for (auto d : index.postings_of(*t)) {
      const auto& doc = index.documents()[d];
      if (rs.covers(doc)) ++hits[bucket_of(doc.timestamp, g).start];
    }
  }
  for (auto& p : points) {
    p.docs_total = index.total_in(rs, p.bucket);
    auto it = hits.find(p.bucket.start);
    p.docs_with_term = it == hits.end() ? 0 : it->second;
    p.normalized = static_cast<double>(p.docs_with_term) / static_cast<double>(std::max<std::size_t>(p.docs_total, 1));
  }
}

}  // namespace detail

/// Share of documents per bucket that contain the term, zero-filled over
/// the whole span of the scope's source (or of the corpus without a source).
inline TrendSeries trend(const TermIndex& index, std::string_view term, const Scope& scope,
                         Granularity granularity = Granularity::month) {
  auto rs = index.resolve(scope);
  TrendSeries out{std::string(term), scope, granularity, {}};
  auto span = index.span(rs.source);
  if (!span) return out;
  out.points = detail::zero_series(span->first, span->second, granularity);
  detail::fill_series(index, term, rs, out.points);
  return out;
}

struct HorizonRow {
  std::string section_id;
  std::string section_name;
  TrendSeries series;

  bool operator==(const HorizonRow&) const = default;
};

struct HorizonSet {
  std::string term;
  std::string forum;
  int depth = 1;
  Granularity granularity = Granularity::month;
  std::vector<HorizonRow> rows;  // tree order

  bool operator==(const HorizonSet&) const = default;
};

/// One trend series per section at `depth` (descendants included), sharing
/// the forum's bucket axis.
inline HorizonSet horizon(const TermIndex& index, const Corpus& corpus, std::string_view term,
                          std::string_view forum_id, int depth, Granularity granularity = Granularity::month) {
  const Forum* forum = corpus.find_forum(forum_id);
  if (!forum) throw Error(ErrorCode::unknown_forum, "no forum '" + std::string(forum_id) + "'");
  if (depth < 1 || depth > forum->max_depth())
    throw Error(ErrorCode::validation, "depth must be within 1.." + std::to_string(forum->max_depth()));
  HorizonSet out{std::string(term), forum->id, depth, granularity, {}};
  auto source = index.source_id(forum->id);
  std::optional<std::pair<Timestamp, Timestamp>> span;
  if (source) span = index.span(*source);
  for (const auto& s : forum->sections) {
    if (s.depth != depth) continue;
    Scope scope{forum->id, s.id};
    TrendSeries series{std::string(term), scope, granularity, {}};
    if (span) {
      series.points = detail::zero_series(span->first, span->second, granularity);
      detail::fill_series(index, term, index.resolve(scope), series.points);
    }
    out.rows.push_back(HorizonRow{s.id, s.name, std::move(series)});
  }
  return out;
}

struct Neologism {
  std::string term;
  std::size_t total_count = 0;
  Timestamp first_seen_at{};

  bool operator==(const Neologism&) const = default;
};

struct NeologismQuery {
  std::string source;
  Date cutoff{};
  std::size_t min_count = 20;
  std::size_t top_n = 100;
  std::size_t offset = 0;
};

/// Terms whose first document in `source` is strictly after the cutoff day
/// began, seen in at least `min_count` documents, and absent from both word
/// lists. Ordered by count, then alphabetically.
inline std::vector<Neologism> neologisms(const TermIndex& index, const NeologismQuery& q,
                                         const std::set<std::string>& stopwords,
                                         const std::set<std::string>& background) {
  auto src = index.source_id(q.source);
  if (!src) throw Error(ErrorCode::unknown_forum, "unknown source '" + q.source + "'");
  auto span = index.span(*src);
  Timestamp cutoff{q.cutoff};
  if (!span || cutoff < Timestamp{std::chrono::floor<std::chrono::days>(span->first)} || cutoff > span->second)
    throw Error(ErrorCode::validation, "cutoff " + format_date(q.cutoff) + " lies outside the source's time span");
  auto [lo, hi] = index.source_range(*src);
  std::vector<Neologism> out;
  const auto& vocab = index.vocabulary();
  for (std::uint32_t t = 0; t < vocab.size(); ++t) {
    const auto& term = vocab[t];
    if (stopwords.contains(term) || background.contains(term)) continue;
    const auto& plist = index.postings_of(t);
    auto a = std::lower_bound(plist.begin(), plist.end(), lo);
    auto b = std::lower_bound(plist.begin(), plist.end(), hi);
    auto count = static_cast<std::size_t>(b - a);
    if (count == 0 || count < q.min_count) continue;
    auto first = index.first_occurrence(term, q.source);
    if (!first || *first <= cutoff) continue;
    out.push_back(Neologism{term, count, *first});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.total_count != y.total_count ? x.total_count > y.total_count : x.term < y.term;
  });
  if (q.offset >= out.size()) return {};
  out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(q.offset));
  if (out.size() > q.top_n) out.resize(q.top_n);
  return out;
}

struct FirstSeen {
  std::string source;
  Timestamp at{};

  bool operator==(const FirstSeen&) const = default;
};

/// Rank of a source in the tie-break order; unlisted sources follow the
/// listed ones alphabetically.
inline std::pair<std::size_t, std::string> priority_rank(const std::vector<std::string>& priority,
                                                         const std::string& source) {
  auto it = std::find(priority.begin(), priority.end(), source);
  return {static_cast<std::size_t>(it - priority.begin()), source};
}

/// Earliest occurrence of any alias per source.
inline std::map<std::string, Timestamp> earliest_by_source(const TermIndex& index, const SubstanceEntry& entry) {
  std::map<std::string, Timestamp> out;
  for (const auto& alias : entry.aliases()) {
    for (const auto& src : index.sources()) {
      if (auto ts = index.first_occurrence(alias, src)) {
        auto it = out.find(src);
        if (it == out.end() || *ts < it->second) out[src] = *ts;
      }
    }
  }
  return out;
}

/// Source holding the globally earliest alias occurrence. Identical
/// timestamps go to the source ranked first in `priority`.
inline FirstSeen first_seen(const TermIndex& index, const SubstanceEntry& entry,
                            const std::vector<std::string>& priority) {
  std::optional<FirstSeen> best;
  for (const auto& [src, ts] : earliest_by_source(index, entry)) {
    if (!best || ts < best->at || (ts == best->at && priority_rank(priority, src) < priority_rank(priority, best->source)))
      best = FirstSeen{src, ts};
  }
  if (!best) throw Error(ErrorCode::never_seen, "'" + entry.canonical_name() + "' occurs in no source");
  return *best;
}

struct TreemapNode {
  std::string id;
  std::string name;
  std::size_t own_posts = 0;
  std::size_t subtree_posts = 0;
  std::vector<TreemapNode> children;

  bool operator==(const TreemapNode&) const = default;
};

/// Section tree with post counts; subtree_posts = own + children's subtrees.
inline TreemapNode treemap(const Corpus& corpus, std::string_view forum_id) {
  const auto& forum = corpus.forum(forum_id);
  std::map<std::string, std::size_t> own;
  for (const auto& p : forum.posts) ++own[forum.section_of(p)];
  auto build = [&](auto&& self, const SectionNode& s) -> TreemapNode {
    TreemapNode node{s.id, s.name, own[s.id], own[s.id], {}};
    for (const auto& c : s.children) {
      node.children.push_back(self(self, *forum.find_section(c)));
      node.subtree_posts += node.children.back().subtree_posts;
    }
    return node;
  };
  return build(build, forum.root());
}

inline constexpr std::string_view unknown_country = "UNKNOWN";

/// User count per resolved country for every profile in the forum.
inline std::map<std::string, std::size_t> geo_distribution(const Corpus& corpus, std::string_view forum_id,
                                                           const Gazetteer& gazetteer) {
  const auto& forum = corpus.forum(forum_id);
  std::map<std::string, std::size_t> out;
  for (const auto& u : forum.users) {
    std::optional<Gazetteer::Entry> hit;
    if (u.location_raw) hit = gazetteer.resolve(*u.location_raw);
    ++out[hit ? hit->code : std::string(unknown_country)];
  }
  return out;
}

enum class ActivityMetric { posts_per_user, posts_per_thread };

inline std::optional<ActivityMetric> parse_activity_metric(std::string_view s) {
  if (s == "posts_per_user") return ActivityMetric::posts_per_user;
  if (s == "posts_per_thread") return ActivityMetric::posts_per_thread;
  return std::nullopt;
}

/// Posts per author (authors with at least one post) or per thread (threads
/// with at least one post), as a sorted multiset.
inline std::vector<std::int64_t> activity_histogram(const Corpus& corpus, std::string_view forum_id,
                                                    ActivityMetric metric) {
  const auto& forum = corpus.forum(forum_id);
  std::map<std::string, std::int64_t> counts;
  for (const auto& p : forum.posts) ++counts[metric == ActivityMetric::posts_per_user ? p.author_id : p.thread_id];
  std::vector<std::int64_t> out;
  out.reserve(counts.size());
  for (const auto& [k, c] : counts) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

struct SubstanceSummaryRow {
  std::string substance;
  std::size_t tweet_count = 0;
  std::map<std::string, std::size_t> post_count;  // per forum id
  std::set<int> shop_ids;
  std::optional<FirstSeen> first_seen;            // empty when never seen

  bool operator==(const SubstanceSummaryRow&) const = default;
};

namespace detail {

inline std::size_t docs_matching(const TermIndex& index, const SubstanceEntry& entry, std::string_view source) {
  auto src = index.source_id(source);
  if (!src) return 0;
  auto [lo, hi] = index.source_range(*src);
  std::set<std::uint32_t> docs;
  for (const auto& alias : entry.aliases()) {
    auto t = index.term_id(alias);
    if (!t) continue;
    const auto& plist = index.postings_of(*t);
    docs.insert(std::lower_bound(plist.begin(), plist.end(), lo), std::lower_bound(plist.begin(), plist.end(), hi));
  }
  return docs.size();
}

}  // namespace detail

/// Per-substance activity: matching tweets and posts per forum (documents,
/// not occurrences), shops listing it in any snapshot, and first sighting.
inline std::vector<SubstanceSummaryRow> substance_summary(const Corpus& corpus, const TermIndex& index,
                                                          const std::vector<SubstanceEntry>& lexicon,
                                                          const std::vector<std::string>& priority) {
  if (lexicon.empty()) throw Error(ErrorCode::validation, "lexicon is empty");
  std::vector<std::pair<int, std::vector<std::string>>> listing_tokens;
  for (const auto& s : corpus.snapshots)
    for (const auto& l : s.listings) listing_tokens.emplace_back(s.shop_id, token_set(l.name));
  std::vector<SubstanceSummaryRow> rows;
  for (const auto& entry : lexicon) {
    SubstanceSummaryRow row;
    row.substance = entry.canonical_name();
    row.tweet_count = detail::docs_matching(index, entry, microblog_source);
    for (const auto& f : corpus.forums) row.post_count[f.id] = detail::docs_matching(index, entry, f.id);
    for (const auto& [shop, tokens] : listing_tokens)
      if (alias_matches_tokens(tokens, entry)) row.shop_ids.insert(shop);
    try {
      row.first_seen = first_seen(index, entry, priority);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::never_seen) throw;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct LinkOverlapPair {
  std::string source_a;
  std::string source_b;
  std::size_t domains_a = 0;
  std::size_t domains_b = 0;
  std::vector<std::string> intersection;

  bool operator==(const LinkOverlapPair&) const = default;
};

struct LinkOverlapReport {
  std::map<std::string, std::set<std::string>> domains;  // per source
  std::vector<LinkOverlapPair> pairs;

  bool operator==(const LinkOverlapReport&) const = default;
};

/// Linked domains per forum and in tweets, compared pairwise with each other
/// and with the configured shop domains (source "shops").
inline LinkOverlapReport link_overlap(const Corpus& corpus, const std::vector<std::string>& shop_domains) {
  LinkOverlapReport report;
  std::vector<std::string> order;
  for (const auto& f : corpus.forums) {
    auto& set = report.domains[f.id];
    for (const auto& p : f.posts)
      for (const auto& link : ingest::extract_links(p.text)) set.insert(link.domain);
    order.push_back(f.id);
  }
  {
    auto& set = report.domains[std::string(microblog_source)];
    for (const auto& t : corpus.tweets)
      for (const auto& link : ingest::extract_links(t.text)) set.insert(link.domain);
    order.emplace_back(microblog_source);
  }
  {
    auto& set = report.domains[std::string(shop_source)];
    for (const auto& d : shop_domains) {
      auto domain = ingest::registrable_domain(d);
      if (!domain.empty()) set.insert(domain);
    }
    order.emplace_back(shop_source);
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& a = report.domains[order[i]];
      const auto& b = report.domains[order[j]];
      LinkOverlapPair pair{order[i], order[j], a.size(), b.size(), {}};
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(pair.intersection));
      report.pairs.push_back(std::move(pair));
    }
  return report;
}

}  // namespace infoveil::analytics
