// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>

#include "infoveil/ingest/archive.hpp"

namespace infoveil::ingest {

/// Display metadata for a forum source; kind defaults to Bluelight-like.
struct ForumInfo {
  std::string name;
  SourceKind kind = SourceKind::forum_bluelight_like;
};

/// Builds a validated corpus from archive records in ingestion order.
///
/// Sections and user profiles take their latest record (the latest known
/// tree wins). Posts, threads and tweets are append-only: the first record
/// for an id is kept. Snapshots are keyed by (shop_id, captured_at).
inline Corpus assemble_corpus(const std::vector<ArchiveRecord>& records,
                              const std::map<std::string, ForumInfo>& forum_info = {}) {
  struct ForumParts {
    std::vector<SectionNode> sections;
    std::map<std::string, std::size_t> section_at;
    std::vector<Thread> threads;
    std::set<std::string> thread_ids;
    std::vector<Post> posts;
    std::set<std::string> post_ids;
    std::vector<UserProfile> users;
    std::map<std::string, std::size_t> user_at;
  };
  std::map<std::string, ForumParts> parts;
  Corpus corpus;
  std::set<std::string> tweet_ids;
  std::map<std::pair<int, Date>, std::size_t> snapshot_at;

  for (const auto& r : records) {
    switch (r.record_type) {
      case RecordType::section: {
        auto& fp = parts[r.source];
        const auto& s = std::get<SectionNode>(r.payload);
        if (auto it = fp.section_at.find(s.id); it != fp.section_at.end()) {
          auto& existing = fp.sections[it->second];
          auto children = existing.children;
          existing = s;
          for (const auto& c : children)
            if (std::find(existing.children.begin(), existing.children.end(), c) == existing.children.end())
              existing.children.push_back(c);
        } else {
          fp.section_at[s.id] = fp.sections.size();
          fp.sections.push_back(s);
        }
        break;
      }
      case RecordType::thread: {
        const auto& t = std::get<Thread>(r.payload);
        auto& fp = parts[t.forum_id.empty() ? r.source : t.forum_id];
        if (fp.thread_ids.insert(t.id).second) fp.threads.push_back(t);
        break;
      }
      case RecordType::post: {
        auto& fp = parts[r.source];
        const auto& p = std::get<Post>(r.payload);
        if (fp.post_ids.insert(p.id).second) fp.posts.push_back(p);
        break;
      }
      case RecordType::user: {
        const auto& u = std::get<UserProfile>(r.payload);
        auto& fp = parts[u.forum_id.empty() ? r.source : u.forum_id];
        if (auto it = fp.user_at.find(u.id); it != fp.user_at.end())
          fp.users[it->second] = u;
        else {
          fp.user_at[u.id] = fp.users.size();
          fp.users.push_back(u);
        }
        break;
      }
      case RecordType::tweet: {
        const auto& t = std::get<Tweet>(r.payload);
        if (tweet_ids.insert(t.id).second) corpus.tweets.push_back(t);
        break;
      }
      case RecordType::listing_snapshot: {
        const auto& s = std::get<ShopSnapshot>(r.payload);
        auto key = std::make_pair(s.shop_id, s.captured_at);
        if (!snapshot_at.contains(key)) {
          snapshot_at[key] = corpus.snapshots.size();
          corpus.snapshots.push_back(s);
        }
        break;
      }
    }
  }

  for (auto& [id, fp] : parts) {
    Forum f;
    f.id = id;
    auto info = forum_info.find(id);
    if (info != forum_info.end()) {
      f.name = info->second.name;
      f.kind = info->second.kind;
    }
    f.sections = std::move(fp.sections);
    f.threads = std::move(fp.threads);
    f.posts = std::move(fp.posts);
    f.users = std::move(fp.users);
    if (f.name.empty()) {
      for (const auto& s : f.sections)
        if (!s.parent_id) f.name = s.name;
      if (f.name.empty()) f.name = id;
    }
    corpus.forums.push_back(std::move(f));
  }
  corpus.finalize();
  return corpus;
}

/// Inverse of assemble_corpus for a finalized corpus: one record per value.
inline std::vector<ArchiveRecord> corpus_records(const Corpus& corpus, Timestamp ingested_at) {
  std::vector<ArchiveRecord> out;
  for (const auto& f : corpus.forums) {
    for (const auto& s : f.sections) out.push_back({RecordType::section, f.id, s, ingested_at});
    for (const auto& t : f.threads) out.push_back({RecordType::thread, f.id, t, ingested_at});
    for (const auto& p : f.posts) out.push_back({RecordType::post, f.id, p, ingested_at});
    for (const auto& u : f.users) out.push_back({RecordType::user, f.id, u, ingested_at});
  }
  for (const auto& t : corpus.tweets) out.push_back({RecordType::tweet, std::string(microblog_source), t, ingested_at});
  for (const auto& s : corpus.snapshots)
    out.push_back({RecordType::listing_snapshot, std::string(shop_source), s, ingested_at});
  return out;
}

}  // namespace infoveil::ingest
