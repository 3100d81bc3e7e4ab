// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "infoveil/corpus.hpp"
#include "infoveil/json_io.hpp"

namespace infoveil {

inline constexpr std::string_view index_magic = "INFOVEIL-INDEX";
inline constexpr int index_format_version = 1;
inline constexpr std::string_view engine_version = "1.0.0";

/// Which documents a query covers. A section scope includes its descendants
/// and requires a forum source.
struct Scope {
  std::optional<std::string> source;
  std::optional<std::string> section;

  bool operator==(const Scope&) const = default;
};

/// One (term, document) occurrence as seen by callers.
struct Posting {
  std::string doc_id;
  std::string source;
  std::optional<std::string> section_id;
  TimeBucket bucket;
  Timestamp timestamp;
};

struct TermCount {
  std::size_t docs_with_term = 0;
  std::size_t docs_total = 0;

  bool operator==(const TermCount&) const = default;
};

/// Immutable term index over every post, tweet and shop listing.
///
/// Term statistics count documents, not occurrences: a post that repeats a
/// term five times contributes one. Raw occurrence counts are kept for
/// comparison (term_occurrences).
class TermIndex {
public:
  struct Document {
    std::string id;
    std::uint32_t source = 0;
    std::int32_t section = -1;  // index into sections(), -1 when sectionless
    Timestamp timestamp{};
  };
  struct Section {
    std::uint32_t source = 0;
    std::string id;
    std::int32_t parent = -1;
  };
  struct Entry {
    std::uint32_t term = 0;
    std::uint32_t count = 0;
  };

  TermIndex() = default;

  std::size_t document_count() const { return docs_.size(); }
  std::size_t vocabulary_size() const { return vocab_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocab_; }
  const std::vector<std::string>& sources() const { return sources_; }
  const std::vector<Document>& documents() const { return docs_; }
  const std::vector<Section>& sections() const { return sections_; }

  std::optional<std::uint32_t> term_id(std::string_view term) const {
    auto it = std::lower_bound(vocab_.begin(), vocab_.end(), term);
    if (it == vocab_.end() || *it != term) return std::nullopt;
    return static_cast<std::uint32_t>(it - vocab_.begin());
  }

  std::optional<std::uint32_t> source_id(std::string_view source) const {
    auto it = std::lower_bound(sources_.begin(), sources_.end(), source);
    if (it == sources_.end() || *it != source) return std::nullopt;
    return static_cast<std::uint32_t>(it - sources_.begin());
  }

  /// Document ordinals containing the term, ascending.
  const std::vector<std::uint32_t>& postings_of(std::uint32_t term) const { return postings_[term]; }
  /// Distinct terms of a document with their in-document occurrence counts.
  const std::vector<Entry>& terms_of(std::uint32_t doc) const { return forward_[doc]; }

  std::vector<Posting> postings(std::string_view term, Granularity g = Granularity::month) const {
    std::vector<Posting> out;
    auto t = term_id(term);
    if (!t) return out;
    for (auto d : postings_[*t]) {
      const auto& doc = docs_[d];
      std::optional<std::string> section;
      if (doc.section >= 0) section = sections_[doc.section].id;
      out.push_back(Posting{doc.id, sources_[doc.source], section, bucket_of(doc.timestamp, g), doc.timestamp});
    }
    return out;
  }

  /// Earliest document time containing the term within one source.
  std::optional<Timestamp> first_occurrence(std::string_view term, std::string_view source) const {
    auto t = term_id(term);
    auto s = source_id(source);
    if (!t || !s) return std::nullopt;
    auto it = first_seen_.find(key(*t, *s));
    if (it == first_seen_.end()) return std::nullopt;
    return it->second;
  }

  /// Range of document ordinals belonging to a source (documents are stored
  /// grouped by source).
  std::pair<std::uint32_t, std::uint32_t> source_range(std::uint32_t source) const {
    return source_ranges_[source];
  }

  /// Earliest and latest document time within a source, or overall.
  std::optional<std::pair<Timestamp, Timestamp>> span(std::optional<std::uint32_t> source = std::nullopt) const {
    std::uint32_t lo = 0, hi = static_cast<std::uint32_t>(docs_.size());
    if (source) std::tie(lo, hi) = source_ranges_[*source];
    if (lo == hi) return std::nullopt;
    Timestamp a = docs_[lo].timestamp, b = docs_[lo].timestamp;
    for (auto i = lo; i < hi; ++i) {
      a = std::min(a, docs_[i].timestamp);
      b = std::max(b, docs_[i].timestamp);
    }
    return std::make_pair(a, b);
  }

  /// Resolved form of a Scope: the source (if any) and a per-section mask.
  struct ResolvedScope {
    std::optional<std::uint32_t> source;
    std::vector<bool> sections;  // empty means "all sections"

    bool covers(const Document& d) const {
      if (source && d.source != *source) return false;
      if (sections.empty()) return true;
      return d.section >= 0 && sections[d.section];
    }
  };

  ResolvedScope resolve(const Scope& scope) const {
    ResolvedScope r;
    if (scope.source) {
      r.source = source_id(*scope.source);
      if (!r.source) throw Error(ErrorCode::unknown_forum, "unknown source '" + *scope.source + "'");
    }
    if (scope.section) {
      if (!r.source) throw Error(ErrorCode::unknown_section, "a section scope needs a source");
      auto root = find_section(*r.source, *scope.section);
      if (!root) throw Error(ErrorCode::unknown_section, "no section '" + *scope.section + "' in " + *scope.source);
      r.sections.assign(sections_.size(), false);
      for (auto s : subtree(*root)) r.sections[s] = true;
    }
    return r;
  }

  std::optional<std::int32_t> find_section(std::uint32_t source, std::string_view id) const {
    auto it = section_lookup_.find(std::to_string(source) + '\x1f' + std::string(id));
    if (it == section_lookup_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::int32_t> subtree(std::int32_t root) const {
    std::vector<std::int32_t> out{root};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (auto c : children_[out[i]]) out.push_back(c);
    return out;
  }

  /// Documents in `scope` and `bucket`, and how many of them contain `term`.
  TermCount term_count(std::string_view term, const Scope& scope, const TimeBucket& bucket) const {
    auto rs = resolve(scope);
    TermCount out;
    out.docs_total = total_in(rs, bucket);
    if (auto t = term_id(term)) {
      for (auto d : postings_[*t]) {
        const auto& doc = docs_[d];
        if (rs.covers(doc) && bucket.contains(doc.timestamp)) ++out.docs_with_term;
      }
    }
    return out;
  }

  /// Raw occurrence count of `term` within scope and bucket.
  std::size_t term_occurrences(std::string_view term, const Scope& scope, const TimeBucket& bucket) const {
    auto rs = resolve(scope);
    std::size_t n = 0;
    auto t = term_id(term);
    if (!t) return 0;
    for (auto d : postings_[*t]) {
      const auto& doc = docs_[d];
      if (!rs.covers(doc) || !bucket.contains(doc.timestamp)) continue;
      const auto& fw = forward_[d];
      auto it = std::lower_bound(fw.begin(), fw.end(), *t, [](const Entry& e, std::uint32_t v) { return e.term < v; });
      n += it->count;
    }
    return n;
  }

  /// Total documents per (source, section, bucket), summed over the scope.
  std::size_t total_in(const ResolvedScope& rs, const TimeBucket& bucket) const {
    std::size_t n = 0;
    const auto& table = totals_[static_cast<int>(bucket.granularity)];
    for (std::uint32_t s = 0; s < sources_.size(); ++s) {
      if (rs.source && s != *rs.source) continue;
      auto add = [&](std::int32_t section) {
        auto it = table.find(total_key(s, section, bucket.start));
        if (it != table.end()) n += it->second;
      };
      if (rs.sections.empty()) {
        add(-1);
        for (std::size_t sec = 0; sec < sections_.size(); ++sec)
          if (sections_[sec].source == s) add(static_cast<std::int32_t>(sec));
      } else {
        for (std::size_t sec = 0; sec < sections_.size(); ++sec)
          if (rs.sections[sec]) add(static_cast<std::int32_t>(sec));
      }
    }
    return n;
  }

  /// Terms co-occurring with `term` in scope, weighted by the number of
  /// documents containing both; descending weight, ties alphabetical.
  std::vector<std::pair<std::string, std::size_t>> cooccurrence(std::string_view term, const Scope& scope,
                                                                std::size_t top_n,
                                                                const std::set<std::string>& stopwords,
                                                                std::size_t offset = 0) const {
    if (top_n == 0) throw Error(ErrorCode::validation, "top_n must be at least 1");
    auto rs = resolve(scope);
    std::vector<std::pair<std::string, std::size_t>> out;
    auto t = term_id(term);
    if (!t) return out;
    std::unordered_map<std::uint32_t, std::size_t> weight;
    for (auto d : postings_[*t]) {
      if (!rs.covers(docs_[d])) continue;
      for (const auto& e : forward_[d])
        if (e.term != *t) ++weight[e.term];
    }
    for (const auto& [other, w] : weight)
      if (!stopwords.contains(vocab_[other])) out.emplace_back(vocab_[other], w);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (offset >= out.size()) return {};
    out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(offset));
    if (out.size() > top_n) out.resize(top_n);
    return out;
  }

  /// Builds the index. Documents: forum posts (source = forum id, filed
  /// under their thread's section), tweets (source "twitter") and shop
  /// listings (source "shops", dated at capture).
  static TermIndex build(const Corpus& corpus);

  json to_json() const;
  static TermIndex from_json(const json& j);

private:
  struct RawDoc {
    Document doc;
    std::string text;
  };

  static std::uint64_t key(std::uint32_t term, std::uint32_t source) {
    return (static_cast<std::uint64_t>(term) << 32) | source;
  }
  static std::string total_key(std::uint32_t source, std::int32_t section, Date start) {
    return std::to_string(source) + '/' + std::to_string(section) + '/' + std::to_string(start.time_since_epoch().count());
  }

  void derive();

  std::vector<std::string> sources_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> source_ranges_;
  std::vector<Section> sections_;
  std::vector<std::vector<std::int32_t>> children_;
  std::unordered_map<std::string, std::int32_t> section_lookup_;
  std::vector<Document> docs_;
  std::vector<std::string> vocab_;
  std::vector<std::vector<Entry>> forward_;
  std::vector<std::vector<std::uint32_t>> postings_;
  std::unordered_map<std::uint64_t, Timestamp> first_seen_;
  std::unordered_map<std::string, std::size_t> totals_[3];
};

inline TermIndex TermIndex::build(const Corpus& corpus) {
  TermIndex ix;
  std::set<std::string> source_set;
  for (const auto& f : corpus.forums) source_set.insert(f.id);
  if (!corpus.tweets.empty()) source_set.insert(std::string(microblog_source));
  if (!corpus.snapshots.empty()) source_set.insert(std::string(shop_source));
  ix.sources_.assign(source_set.begin(), source_set.end());

  std::vector<std::pair<Document, std::vector<std::string>>> docs;
  for (const auto& f : corpus.forums) {
    auto src = *ix.source_id(f.id);
    std::unordered_map<std::string, std::int32_t> local;
    for (const auto& s : f.sections) {
      auto ord = static_cast<std::int32_t>(ix.sections_.size());
      local[s.id] = ord;
      ix.sections_.push_back(Section{src, s.id, s.parent_id ? local.at(*s.parent_id) : -1});
    }
    for (const auto& p : f.posts)
      docs.push_back({Document{p.id, src, local.at(f.section_of(p)), p.created_at}, tokenize(p.text)});
  }
  if (!corpus.tweets.empty()) {
    auto src = *ix.source_id(microblog_source);
    for (const auto& t : corpus.tweets) docs.push_back({Document{t.id, src, -1, t.created_at}, tokenize(t.text)});
  }
  if (!corpus.snapshots.empty()) {
    auto src = *ix.source_id(shop_source);
    for (const auto& s : corpus.snapshots)
      for (std::size_t i = 0; i < s.listings.size(); ++i)
        docs.push_back({Document{std::to_string(s.shop_id) + "/" + format_date(s.captured_at) + "/" + std::to_string(i),
                                 src, -1, Timestamp{s.captured_at}},
                        tokenize(s.listings[i].name)});
  }
  std::stable_sort(docs.begin(), docs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first.source, a.first.timestamp, a.first.id) <
           std::tie(b.first.source, b.first.timestamp, b.first.id);
  });

  std::set<std::string> vocab;
  for (const auto& [d, tokens] : docs) vocab.insert(tokens.begin(), tokens.end());
  ix.vocab_.assign(vocab.begin(), vocab.end());
  for (auto& [d, tokens] : docs) {
    std::map<std::uint32_t, std::uint32_t> counts;
    for (const auto& tok : tokens) ++counts[*ix.term_id(tok)];
    std::vector<Entry> fw;
    fw.reserve(counts.size());
    for (auto [t, c] : counts) fw.push_back(Entry{t, c});
    ix.docs_.push_back(std::move(d));
    ix.forward_.push_back(std::move(fw));
  }
  ix.derive();
  return ix;
}

inline void TermIndex::derive() {
  children_.assign(sections_.size(), {});
  section_lookup_.clear();
  for (std::size_t i = 0; i < sections_.size(); ++i) {
    if (sections_[i].parent >= 0) children_[sections_[i].parent].push_back(static_cast<std::int32_t>(i));
    section_lookup_[std::to_string(sections_[i].source) + '\x1f' + sections_[i].id] = static_cast<std::int32_t>(i);
  }
  source_ranges_.assign(sources_.size(), {0, 0});
  for (std::uint32_t s = 0; s < sources_.size(); ++s) {
    auto lo = std::lower_bound(docs_.begin(), docs_.end(), s, [](const Document& d, std::uint32_t v) { return d.source < v; });
    auto hi = std::upper_bound(docs_.begin(), docs_.end(), s, [](std::uint32_t v, const Document& d) { return v < d.source; });
    source_ranges_[s] = {static_cast<std::uint32_t>(lo - docs_.begin()), static_cast<std::uint32_t>(hi - docs_.begin())};
  }
  postings_.assign(vocab_.size(), {});
  first_seen_.clear();
  for (auto& t : totals_) t.clear();
  for (std::uint32_t d = 0; d < docs_.size(); ++d) {
    const auto& doc = docs_[d];
    for (auto g : {Granularity::day, Granularity::week, Granularity::month})
      ++totals_[static_cast<int>(g)][total_key(doc.source, doc.section, bucket_of(doc.timestamp, g).start)];
    for (const auto& e : forward_[d]) {
      postings_[e.term].push_back(d);
      auto k = key(e.term, doc.source);
      auto it = first_seen_.find(k);
      if (it == first_seen_.end() || doc.timestamp < it->second) first_seen_[k] = doc.timestamp;
    }
  }
}

inline json TermIndex::to_json() const {
  json j;
  j["magic"] = index_magic;
  j["format_version"] = index_format_version;
  j["engine_version"] = engine_version;
  j["sources"] = sources_;
  json secs = json::array();
  for (const auto& s : sections_) secs.push_back(json::array({s.source, s.id, s.parent}));
  j["sections"] = std::move(secs);
  j["vocabulary"] = vocab_;
  json docs = json::array();
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    const auto& doc = docs_[d];
    json terms = json::array();
    for (const auto& e : forward_[d]) {
      terms.push_back(e.term);
      terms.push_back(e.count);
    }
    docs.push_back(json::array({doc.id, doc.source, doc.section, doc.timestamp.time_since_epoch().count(), std::move(terms)}));
  }
  j["documents"] = std::move(docs);
  return j;
}

inline TermIndex TermIndex::from_json(const json& j) {
  if (j.value("magic", std::string{}) != index_magic)
    throw Error(ErrorCode::stale_index, "not an index artifact (bad magic)");
  if (j.value("format_version", 0) != index_format_version || j.value("engine_version", std::string{}) != engine_version)
    throw Error(ErrorCode::stale_index, "index artifact was built by a different engine version; rebuild it");
  TermIndex ix;
  ix.sources_ = j.at("sources").get<std::vector<std::string>>();
  for (const auto& s : j.at("sections"))
    ix.sections_.push_back(Section{s[0].get<std::uint32_t>(), s[1].get<std::string>(), s[2].get<std::int32_t>()});
  ix.vocab_ = j.at("vocabulary").get<std::vector<std::string>>();
  for (const auto& d : j.at("documents")) {
    ix.docs_.push_back(Document{d[0].get<std::string>(), d[1].get<std::uint32_t>(), d[2].get<std::int32_t>(),
                                Timestamp{std::chrono::seconds{d[3].get<std::int64_t>()}}});
    std::vector<Entry> fw;
    const auto& terms = d[4];
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2)
      fw.push_back(Entry{terms[i].get<std::uint32_t>(), terms[i + 1].get<std::uint32_t>()});
    ix.forward_.push_back(std::move(fw));
  }
  ix.derive();
  return ix;
}

}  // namespace infoveil
