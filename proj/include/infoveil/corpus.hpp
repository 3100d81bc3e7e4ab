// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "infoveil/error.hpp"
#include "infoveil/time.hpp"
#include "infoveil/tokenizer.hpp"

namespace infoveil {

enum class SourceKind { forum_bluelight_like, forum_drugsforum_like, shop, microblog };

constexpr std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::forum_bluelight_like: return "ForumBluelightLike";
    case SourceKind::forum_drugsforum_like: return "ForumDrugsforumLike";
    case SourceKind::shop: return "Shop";
    case SourceKind::microblog: return "Microblog";
  }
  return "Microblog";
}

inline std::optional<SourceKind> parse_source_kind(std::string_view s) {
  for (auto k : {SourceKind::forum_bluelight_like, SourceKind::forum_drugsforum_like, SourceKind::shop,
                 SourceKind::microblog})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

constexpr bool is_forum(SourceKind kind) {
  return kind == SourceKind::forum_bluelight_like || kind == SourceKind::forum_drugsforum_like;
}

/// Source tags used for non-forum documents. Forum documents use the forum id.
inline constexpr std::string_view microblog_source = "twitter";
inline constexpr std::string_view shop_source = "shops";

struct SectionNode {
  std::string id;
  std::string name;
  std::optional<std::string> parent_id;
  int depth = 0;
  std::vector<std::string> children;

  bool operator==(const SectionNode&) const = default;
};

struct Thread {
  std::string id;
  std::string forum_id;
  std::string section_id;
  std::string title;
  Timestamp created_at{};

  bool operator==(const Thread&) const = default;
};

struct Post {
  std::string id;
  std::string thread_id;
  std::string author_id;
  Timestamp created_at{};
  std::string text;

  bool operator==(const Post&) const = default;
};

struct UserProfile {
  std::string id;
  std::string forum_id;
  std::string handle;
  std::optional<std::string> location_raw;
  int post_count = 0;

  bool operator==(const UserProfile&) const = default;
};

struct Tweet {
  std::string id;
  Timestamp created_at{};
  std::string author_handle;
  std::string text;
  std::vector<std::string> matched_keywords;  // sorted, distinct

  bool operator==(const Tweet&) const = default;
};

struct ShopListing {
  std::string name;
  std::optional<double> price;
  std::optional<std::string> currency;
  std::optional<std::string> unit;

  bool operator==(const ShopListing&) const = default;
};

struct ShopSnapshot {
  int shop_id = 0;
  std::string domain;
  Date captured_at{};
  std::vector<ShopListing> listings;

  bool operator==(const ShopSnapshot&) const = default;
};

/// A monitored substance and the case-folded single-token forms that name it.
class SubstanceEntry {
public:
  SubstanceEntry() = default;
  SubstanceEntry(std::string canonical, const std::vector<std::string>& aliases = {})
      : canonical_name_(std::move(canonical)) {
    add_alias(canonical_name_);
    for (const auto& a : aliases) add_alias(a);
  }

  const std::string& canonical_name() const { return canonical_name_; }
  const std::set<std::string>& aliases() const { return aliases_; }

  bool operator==(const SubstanceEntry&) const = default;

private:
  void add_alias(std::string_view alias) {
    auto form = normalize_term(alias);
    aliases_.insert(form.empty() ? unicode::fold(alias) : form);
  }

  std::string canonical_name_;
  std::set<std::string> aliases_;
};

/// True iff one of the entry's aliases equals a whole token of `text`.
inline bool alias_matches(std::string_view text, const SubstanceEntry& entry) {
  for (const auto& token : tokenize(text))
    if (entry.aliases().contains(token)) return true;
  return false;
}

inline bool alias_matches_tokens(const std::vector<std::string>& sorted_tokens, const SubstanceEntry& entry) {
  for (const auto& alias : entry.aliases())
    if (std::binary_search(sorted_tokens.begin(), sorted_tokens.end(), alias)) return true;
  return false;
}

/// One forum: its section tree (latest known shape), threads, posts and users.
class Forum {
public:
  std::string id;
  std::string name;
  SourceKind kind = SourceKind::forum_bluelight_like;
  std::vector<SectionNode> sections;  // tree (pre-)order, root first
  std::vector<Thread> threads;
  std::vector<Post> posts;
  std::vector<UserProfile> users;

  const SectionNode& root() const { return sections.front(); }

  const SectionNode* find_section(std::string_view section_id) const {
    auto it = section_pos_.find(std::string(section_id));
    return it == section_pos_.end() ? nullptr : &sections[it->second];
  }
  const Thread* find_thread(std::string_view thread_id) const {
    auto it = thread_pos_.find(std::string(thread_id));
    return it == thread_pos_.end() ? nullptr : &threads[it->second];
  }

  /// Section the post was filed under (through its thread).
  const std::string& section_of(const Post& post) const { return find_thread(post.thread_id)->section_id; }

  /// The section and all of its descendants.
  std::vector<std::string> subtree(std::string_view section_id) const {
    std::vector<std::string> out;
    const SectionNode* start = find_section(section_id);
    if (!start) return out;
    std::vector<const SectionNode*> stack{start};
    while (!stack.empty()) {
      auto node = stack.back();
      stack.pop_back();
      out.push_back(node->id);
      for (auto it = node->children.rbegin(); it != node->children.rend(); ++it) stack.push_back(find_section(*it));
    }
    return out;
  }

  int max_depth() const {
    int d = 0;
    for (const auto& s : sections) d = std::max(d, s.depth);
    return d;
  }

  /// Rebuilds lookup tables, orders sections in tree order, recomputes depths
  /// and user post counts, and checks referential integrity.
  void finalize();

private:
  std::unordered_map<std::string, std::size_t> section_pos_;
  std::unordered_map<std::string, std::size_t> thread_pos_;
};

inline void Forum::finalize() {
  auto fail = [&](const std::string& what) { throw Error(ErrorCode::validation, "forum '" + id + "': " + what); };
  if (sections.empty()) fail("no sections");

  std::map<std::string, SectionNode> by_id;
  std::vector<std::string> appearance;
  for (auto& s : sections) {
    if (!by_id.contains(s.id)) appearance.push_back(s.id);
    by_id[s.id] = s;
  }
  std::optional<std::string> root_id;
  for (const auto& id_ : appearance) {
    const auto& s = by_id[id_];
    if (!s.parent_id) {
      if (root_id) fail("more than one root section ('" + *root_id + "', '" + s.id + "')");
      root_id = s.id;
    } else if (!by_id.contains(*s.parent_id)) {
      fail("section '" + s.id + "' has unknown parent '" + *s.parent_id + "'");
    }
  }
  if (!root_id) fail("no root section");

  // Children: listed order first, then any child found only via parent_id.
  std::map<std::string, std::vector<std::string>> kids;
  for (const auto& id_ : appearance) {
    const auto& s = by_id[id_];
    auto& list = kids[s.id];
    for (const auto& c : s.children)
      if (by_id.contains(c) && by_id[c].parent_id == s.id && std::find(list.begin(), list.end(), c) == list.end())
        list.push_back(c);
  }
  for (const auto& id_ : appearance) {
    const auto& s = by_id[id_];
    if (!s.parent_id) continue;
    auto& list = kids[*s.parent_id];
    if (std::find(list.begin(), list.end(), s.id) == list.end()) list.push_back(s.id);
  }

  std::vector<SectionNode> ordered;
  std::set<std::string> seen;
  std::vector<std::pair<std::string, int>> stack{{*root_id, 0}};
  while (!stack.empty()) {
    auto [sid, depth] = stack.back();
    stack.pop_back();
    if (!seen.insert(sid).second) fail("cycle through section '" + sid + "'");
    SectionNode node = by_id[sid];
    node.depth = depth;
    node.children = kids[sid];
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) stack.emplace_back(*it, depth + 1);
    ordered.push_back(std::move(node));
  }
  if (ordered.size() != by_id.size()) fail("sections unreachable from the root (cycle or detached subtree)");
  sections = std::move(ordered);

  section_pos_.clear();
  for (std::size_t i = 0; i < sections.size(); ++i) section_pos_[sections[i].id] = i;
  thread_pos_.clear();
  for (std::size_t i = 0; i < threads.size(); ++i) {
    const auto& t = threads[i];
    if (!section_pos_.contains(t.section_id))
      fail("thread '" + t.id + "' refers to unknown section '" + t.section_id + "'");
    if (!thread_pos_.emplace(t.id, i).second) fail("duplicate thread id '" + t.id + "'");
  }
  std::unordered_map<std::string, int> counts;
  std::set<std::string> post_ids;
  for (const auto& p : posts) {
    if (!thread_pos_.contains(p.thread_id)) fail("post '" + p.id + "' refers to unknown thread '" + p.thread_id + "'");
    if (!post_ids.insert(p.id).second) fail("duplicate post id '" + p.id + "'");
    ++counts[p.author_id];
  }
  for (auto& u : users) {
    auto it = counts.find(u.id);
    u.post_count = it == counts.end() ? 0 : it->second;
  }
}

/// Every document the engine knows about, across all source families.
struct Corpus {
  std::vector<Forum> forums;
  std::vector<Tweet> tweets;
  std::vector<ShopSnapshot> snapshots;  // sorted by (shop_id, captured_at)

  const Forum* find_forum(std::string_view id) const {
    for (const auto& f : forums)
      if (f.id == id) return &f;
    return nullptr;
  }

  const Forum& forum(std::string_view id) const {
    if (auto f = find_forum(id)) return *f;
    throw Error(ErrorCode::unknown_forum, "no forum '" + std::string(id) + "'");
  }

  /// Sorts snapshots and checks per-shop capture dates strictly increase.
  void finalize() {
    for (auto& f : forums) f.finalize();
    std::sort(snapshots.begin(), snapshots.end(),
              [](const auto& a, const auto& b) { return std::tie(a.shop_id, a.captured_at) < std::tie(b.shop_id, b.captured_at); });
    for (std::size_t i = 1; i < snapshots.size(); ++i)
      if (snapshots[i].shop_id == snapshots[i - 1].shop_id && snapshots[i].captured_at == snapshots[i - 1].captured_at)
        throw Error(ErrorCode::duplicate_snapshot, "shop " + std::to_string(snapshots[i].shop_id) + " captured twice on " +
                                                        format_date(snapshots[i].captured_at));
    for (const auto& s : snapshots)
      for (const auto& l : s.listings)
        if (l.price && *l.price < 0) throw Error(ErrorCode::validation, "negative price for '" + l.name + "'");
    for (const auto& t : tweets)
      if (t.matched_keywords.empty()) throw Error(ErrorCode::validation, "tweet '" + t.id + "' matched no keyword");
  }
};

}  // namespace infoveil
