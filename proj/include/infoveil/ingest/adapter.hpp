// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "infoveil/html.hpp"
#include "infoveil/ingest/archive.hpp"

namespace infoveil::ingest {

/// How to read one value out of a page element: an optional relative
/// selector, an optional attribute (text content otherwise) and an optional
/// regular expression whose first group (or whole match) is kept.
struct FieldRule {
  std::string select;
  std::string attr;
  std::string pattern;

  std::optional<std::string> extract(const html::Document& doc, std::size_t item) const {
    std::size_t target = item;
    if (!select.empty()) {
      auto found = html::Selector(select).first(doc, item);
      if (!found) return std::nullopt;
      target = *found;
    }
    std::string value;
    if (!attr.empty()) {
      auto v = doc.node(target).attr(attr);
      if (!v) return std::nullopt;
      value = *v;
    } else {
      value = doc.text_of(target);
    }
    if (!pattern.empty()) {
      std::smatch m;
      std::regex re(pattern);
      if (!std::regex_search(value, m, re)) return std::nullopt;
      value = m.size() > 1 ? m[1].str() : m[0].str();
    }
    auto b = value.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return std::string{};
    auto e = value.find_last_not_of(" \t\r\n");
    return value.substr(b, e - b + 1);
  }
};

/// A repeated page region and the fields read from each occurrence.
struct ItemRule {
  std::string item;
  std::map<std::string, FieldRule> fields;

  std::optional<std::string> field(const html::Document& doc, std::size_t node, const std::string& name) const {
    auto it = fields.find(name);
    if (it == fields.end()) return std::nullopt;
    return it->second.extract(doc, node);
  }
};

/// Declarative description of one site's markup. Rules that are absent are
/// simply not applied; at least one landmark must be present on every page.
struct SiteAdapter {
  std::string name;
  SourceKind source_kind = SourceKind::forum_bluelight_like;
  std::vector<std::string> landmarks;
  std::string root_section_id = "root";
  std::string date_order = "dmy";  // how to read ambiguous NN-NN-NNNN dates
  std::optional<ItemRule> breadcrumb;   // id, name; root first
  std::optional<ItemRule> subsections;  // id, name
  std::optional<ItemRule> thread;       // id, title
  std::optional<ItemRule> post;         // id, author_id, created_at, text
  std::optional<ItemRule> profile;      // id, handle, location
  std::optional<ItemRule> listing;      // name, price, currency, unit
};

inline void from_json(const json& j, FieldRule& f) {
  if (j.is_string()) {
    f.select = j.get<std::string>();
    return;
  }
  f.select = j.value("select", std::string{});
  f.attr = j.value("attr", std::string{});
  f.pattern = j.value("pattern", std::string{});
}
inline void to_json(json& j, const FieldRule& f) {
  j = json::object();
  if (!f.select.empty()) j["select"] = f.select;
  if (!f.attr.empty()) j["attr"] = f.attr;
  if (!f.pattern.empty()) j["pattern"] = f.pattern;
}
inline void from_json(const json& j, ItemRule& r) {
  r.item = j.at("item").get<std::string>();
  r.fields = j.value("fields", std::map<std::string, FieldRule>{});
}
inline void to_json(json& j, const ItemRule& r) { j = json{{"item", r.item}, {"fields", r.fields}}; }

inline void from_json(const json& j, SiteAdapter& a) {
  a.name = j.at("name").get<std::string>();
  auto kind = parse_source_kind(j.at("source_kind").get<std::string>());
  if (!kind) throw Error(ErrorCode::validation, "adapter '" + a.name + "': unknown source_kind");
  a.source_kind = *kind;
  a.landmarks = j.value("landmarks", std::vector<std::string>{});
  a.root_section_id = j.value("root_section_id", std::string("root"));
  a.date_order = j.value("date_order", std::string("dmy"));
  auto opt = [&](const char* key, std::optional<ItemRule>& out) {
    if (j.contains(key)) out = j.at(key).get<ItemRule>();
  };
  opt("breadcrumb", a.breadcrumb);
  opt("subsections", a.subsections);
  opt("thread", a.thread);
  opt("post", a.post);
  opt("profile", a.profile);
  opt("listing", a.listing);
  if (a.landmarks.empty()) throw Error(ErrorCode::validation, "adapter '" + a.name + "' has no landmarks");
}
inline void to_json(json& j, const SiteAdapter& a) {
  j = json{{"name", a.name},
           {"source_kind", to_string(a.source_kind)},
           {"landmarks", a.landmarks},
           {"root_section_id", a.root_section_id},
           {"date_order", a.date_order}};
  auto opt = [&](const char* key, const std::optional<ItemRule>& r) {
    if (r) j[key] = *r;
  };
  opt("breadcrumb", a.breadcrumb);
  opt("subsections", a.subsections);
  opt("thread", a.thread);
  opt("post", a.post);
  opt("profile", a.profile);
  opt("listing", a.listing);
}

// Built-in adapters for the three markup families the fixtures use. Sites
// with other markup get a JSON adapter file instead of new code.
inline constexpr std::string_view builtin_adapters_json = R"json([
{
  "name": "bluelight-like",
  "source_kind": "ForumBluelightLike",
  "landmarks": ["div#vb-page"],
  "date_order": "dmy",
  "breadcrumb": {"item": "div#breadcrumb li.navbit a",
                 "fields": {"id": {"attr": "data-section"}, "name": {}}},
  "subsections": {"item": "ol.subforums li.forumbit",
                  "fields": {"id": {"attr": "data-section"}, "name": {"select": "h2.forumtitle"}}},
  "thread": {"item": "div#thread",
             "fields": {"id": {"attr": "data-thread"}, "title": {"select": "h1.threadtitle"}}},
  "post": {"item": "li.postbit",
           "fields": {"id": {"attr": "data-post"},
                      "author_id": {"select": "a.username", "attr": "data-user"},
                      "created_at": {"select": "span.date"},
                      "text": {"select": "blockquote.postcontent"}}},
  "profile": {"item": "div#member-profile",
              "fields": {"id": {"attr": "data-user"}, "handle": {"select": "span.member-name"},
                         "location": {"select": "dd.location"}}}
},
{
  "name": "drugsforum-like",
  "source_kind": "ForumDrugsforumLike",
  "landmarks": ["div.p-body"],
  "date_order": "iso",
  "breadcrumb": {"item": "ul.p-breadcrumbs li a",
                 "fields": {"id": {"attr": "data-node"}, "name": {"select": "span"}}},
  "subsections": {"item": "div.node",
                  "fields": {"id": {"attr": "data-node"}, "name": {"select": "h3.node-title"}}},
  "thread": {"item": "div.block-thread",
             "fields": {"id": {"attr": "data-thread-id"}, "title": {"select": "h1.p-title-value"}}},
  "post": {"item": "article.message",
           "fields": {"id": {"attr": "data-content", "pattern": "post-(\\S+)"},
                      "author_id": {"attr": "data-user-id"},
                      "created_at": {"select": "time", "attr": "datetime"},
                      "text": {"select": "div.bbWrapper"}}},
  "profile": {"item": "div.memberHeader",
              "fields": {"id": {"attr": "data-user-id"}, "handle": {"select": "h1.username"},
                         "location": {"select": "a.location"}}}
},
{
  "name": "generic-shop",
  "source_kind": "Shop",
  "landmarks": ["div.products", "ul.products"],
  "listing": {"item": ".product",
              "fields": {"name": {"select": ".product-title"},
                         "price": {"select": ".price"},
                         "unit": {"select": ".unit"}}}
}
])json";

/// Adapter lookup: built-ins plus any `*.json` adapter files loaded later.
class AdapterRegistry {
public:
  AdapterRegistry() {
    for (const auto& a : json::parse(builtin_adapters_json)) add(a.get<SiteAdapter>());
  }

  void add(SiteAdapter adapter) { adapters_[adapter.name] = std::move(adapter); }

  void load_directory(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) return;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f);
      auto j = json::parse(in);
      if (j.is_array())
        for (const auto& a : j) add(a.get<SiteAdapter>());
      else
        add(j.get<SiteAdapter>());
    }
  }

  const SiteAdapter& get(const std::string& name) const {
    auto it = adapters_.find(name);
    if (it == adapters_.end()) throw Error(ErrorCode::unknown_adapter, "no adapter named '" + name + "'");
    return it->second;
  }

  bool contains(const std::string& name) const { return adapters_.contains(name); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : adapters_) out.push_back(k);
    return out;
  }

private:
  std::map<std::string, SiteAdapter> adapters_;
};

/// Resolves forum time stamps, including the relative forms ("yesterday,
/// 14:30", "3 hours ago", "just now") against the page capture time.
inline std::optional<Timestamp> parse_forum_time(std::string_view raw, Timestamp captured_at,
                                                 std::string_view date_order = "dmy") {
  std::string s = unicode::fold(raw);
  auto trim = [](std::string& v) {
    auto b = v.find_first_not_of(" \t,");
    auto e = v.find_last_not_of(" \t,");
    v = b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) return std::nullopt;
  if (s == "just now" || s == "now") return captured_at;

  static const std::regex ago(R"(^(\d+|an?|one)\s+(second|minute|min|hour|day|week)s?\s+ago$)");
  std::smatch m;
  if (std::regex_match(s, m, ago)) {
    long n = (m[1] == "a" || m[1] == "an" || m[1] == "one") ? 1 : std::stol(m[1]);
    std::string unit = m[2];
    long secs = unit == "second" ? 1 : (unit == "minute" || unit == "min") ? 60 : unit == "hour" ? 3600
                : unit == "day" ? 86400 : 7 * 86400;
    return captured_at - std::chrono::seconds{n * secs};
  }
  static const std::regex relday(R"(^(today|yesterday)(?:\s*,?\s*(?:at\s+)?(\d{1,2}):(\d{2}))?$)");
  if (std::regex_match(s, m, relday)) {
    auto day = std::chrono::floor<std::chrono::days>(captured_at);
    if (m[1] == "yesterday") day -= std::chrono::days{1};
    Timestamp ts{day};
    if (m[2].matched) ts += std::chrono::hours{std::stoi(m[2])} + std::chrono::minutes{std::stoi(m[3])};
    return ts;
  }
  // Normalise "15/03/2010" and "15.03.2010" to the dashed form.
  static const std::regex slashed(R"(^(\d{1,2})[/.](\d{1,2})[/.](\d{4})(.*)$)");
  if (std::regex_match(s, m, slashed)) {
    auto pad = [](const std::string& v) { return v.size() == 1 ? "0" + v : v; };
    if (date_order == "mdy")
      s = pad(m[2]) + "-" + pad(m[1]) + "-" + m[3].str() + m[4].str();
    else
      s = pad(m[1]) + "-" + pad(m[2]) + "-" + m[3].str() + m[4].str();
  }
  for (auto& c : s)
    if (c == 't' || c == 'z') c = static_cast<char>(c - 32);
  return try_parse_timestamp(s);
}

/// Where a page came from, supplied by the caller.
struct PageContext {
  std::string forum_id;
  Timestamp captured_at{};
};

struct Extraction {
  std::vector<ArchiveRecord> records;
  std::vector<std::string> warnings;  // skipped items
};

inline bool has_landmark(const html::Document& doc, const SiteAdapter& adapter) {
  for (const auto& l : adapter.landmarks)
    if (html::Selector(l).first(doc)) return true;
  return false;
}

/// Turns one forum page (section index, thread or member profile) into
/// archive records. Section records always precede thread and post records.
inline Extraction extract_forum_records(std::string_view page_bytes, const SiteAdapter& adapter,
                                        const PageContext& ctx) {
  if (!is_forum(adapter.source_kind))
    throw Error(ErrorCode::adapter_mismatch, "adapter '" + adapter.name + "' is not a forum adapter");
  auto doc = html::parse(page_bytes);
  if (!has_landmark(doc, adapter))
    throw Error(ErrorCode::adapter_mismatch, "page lacks the landmarks of adapter '" + adapter.name + "'");

  Extraction out;
  auto make = [&](RecordType type, Payload payload) {
    out.records.push_back(ArchiveRecord{type, ctx.forum_id, std::move(payload), ctx.captured_at});
  };

  // Section path of this page, root first.
  std::vector<SectionNode> path;
  if (adapter.breadcrumb) {
    for (auto node : html::Selector(adapter.breadcrumb->item).select(doc)) {
      auto id = adapter.breadcrumb->field(doc, node, "id");
      if (!id || id->empty()) {
        out.warnings.push_back("breadcrumb item without id");
        continue;
      }
      SectionNode s;
      s.id = *id;
      s.name = adapter.breadcrumb->field(doc, node, "name").value_or(*id);
      if (!path.empty()) s.parent_id = path.back().id;
      s.depth = static_cast<int>(path.size());
      path.push_back(std::move(s));
    }
  }
  if (path.empty()) path.push_back(SectionNode{adapter.root_section_id, ctx.forum_id, std::nullopt, 0, {}});

  std::vector<SectionNode> subsections;
  if (adapter.subsections) {
    for (auto node : html::Selector(adapter.subsections->item).select(doc)) {
      auto id = adapter.subsections->field(doc, node, "id");
      if (!id || id->empty()) {
        out.warnings.push_back("subsection without id");
        continue;
      }
      SectionNode s;
      s.id = *id;
      s.name = adapter.subsections->field(doc, node, "name").value_or(*id);
      s.parent_id = path.back().id;
      s.depth = path.back().depth + 1;
      path.back().children.push_back(s.id);
      subsections.push_back(std::move(s));
    }
  }

  std::optional<std::size_t> thread_node;
  if (adapter.thread) thread_node = html::Selector(adapter.thread->item).first(doc);
  std::optional<std::size_t> profile_node;
  if (adapter.profile) profile_node = html::Selector(adapter.profile->item).first(doc);

  // Breadcrumb sections are only emitted when the page contributes content
  // under them, so profile pages do not re-announce the tree.
  if (!subsections.empty() || thread_node) {
    for (auto& s : path) make(RecordType::section, s);
    for (auto& s : subsections) make(RecordType::section, s);
  }

  if (thread_node) {
    auto tid = adapter.thread->field(doc, *thread_node, "id");
    if (!tid || tid->empty()) throw Error(ErrorCode::malformed_page, "thread block without id");
    Thread thread;
    thread.id = *tid;
    thread.forum_id = ctx.forum_id;
    thread.section_id = path.back().id;
    thread.title = adapter.thread->field(doc, *thread_node, "title").value_or("");
    std::vector<Post> posts;
    if (adapter.post) {
      for (auto node : html::Selector(adapter.post->item).select(doc)) {
        auto pid = adapter.post->field(doc, node, "id");
        auto author = adapter.post->field(doc, node, "author_id");
        auto when_raw = adapter.post->field(doc, node, "created_at");
        if (!pid || pid->empty() || !author || author->empty() || !when_raw) {
          out.warnings.push_back("post block missing id, author or time");
          continue;
        }
        auto when = parse_forum_time(*when_raw, ctx.captured_at, adapter.date_order);
        if (!when) {
          out.warnings.push_back("post " + *pid + ": unparseable time '" + *when_raw + "'");
          continue;
        }
        posts.push_back(Post{*pid, thread.id, *author, *when, adapter.post->field(doc, node, "text").value_or("")});
      }
    }
    thread.created_at = ctx.captured_at;
    for (const auto& p : posts) thread.created_at = std::min(thread.created_at, p.created_at);
    make(RecordType::thread, thread);
    for (auto& p : posts) make(RecordType::post, std::move(p));
  }

  if (profile_node) {
    auto uid = adapter.profile->field(doc, *profile_node, "id");
    if (!uid || uid->empty()) throw Error(ErrorCode::malformed_page, "profile block without user id");
    UserProfile u;
    u.id = *uid;
    u.forum_id = ctx.forum_id;
    u.handle = adapter.profile->field(doc, *profile_node, "handle").value_or(*uid);
    auto loc = adapter.profile->field(doc, *profile_node, "location");
    if (loc && !loc->empty()) u.location_raw = *loc;
    make(RecordType::user, u);
  }
  return out;
}

struct ShopDescriptor {
  int shop_id = 0;
  std::string domain;
  std::vector<std::string> showcase_urls;
  std::string adapter = "generic-shop";
};

struct ShopExtraction {
  ShopSnapshot snapshot;
  bool empty_showcase = false;
  std::vector<std::string> warnings;
};

/// Reads "£12.50", "12,50 €", "USD 5", "0.002 BTC". Returns nothing when no
/// number is present ("price on request").
inline std::pair<std::optional<double>, std::optional<std::string>> parse_price(std::string_view text) {
  std::string s(text);
  std::optional<std::string> currency;
  static const std::pair<std::string_view, std::string_view> markers[] = {
      {"\xC2\xA3", "GBP"}, {"\xE2\x82\xAC", "EUR"}, {"$", "USD"}, {"\xE0\xB8\xBF", "XBT"}, {"GBP", "GBP"},
      {"EUR", "EUR"},      {"USD", "USD"},          {"BTC", "XBT"}, {"XBT", "XBT"}};
  for (const auto& [marker, code] : markers)
    if (s.find(marker) != std::string::npos) {
      currency = std::string(code);
      break;
    }
  static const std::regex number(R"((\d+(?:[.,]\d{3})*(?:[.,]\d+)?))");
  std::smatch m;
  if (!std::regex_search(s, m, number)) return {std::nullopt, currency};
  std::string digits = m[1];
  // A trailing ",dd" is a decimal comma; other commas group thousands.
  auto last_comma = digits.rfind(',');
  auto last_dot = digits.rfind('.');
  if (last_comma != std::string::npos && (last_dot == std::string::npos || last_comma > last_dot) &&
      digits.size() - last_comma - 1 != 3) {
    digits.erase(std::remove(digits.begin(), digits.end(), '.'), digits.end());
    std::replace(digits.begin(), digits.end(), ',', '.');
  } else {
    digits.erase(std::remove(digits.begin(), digits.end(), ','), digits.end());
  }
  return {std::stod(digits), currency};
}

/// Builds one dated snapshot from all showcase pages of a shop.
inline ShopExtraction extract_shop_snapshot(const std::vector<std::string>& pages, const ShopDescriptor& shop,
                                            Date captured_at, const SiteAdapter& adapter) {
  if (adapter.source_kind != SourceKind::shop || !adapter.listing)
    throw Error(ErrorCode::adapter_mismatch, "adapter '" + adapter.name + "' is not a shop adapter");
  ShopExtraction out;
  out.snapshot.shop_id = shop.shop_id;
  out.snapshot.domain = shop.domain;
  out.snapshot.captured_at = captured_at;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& page : pages) {
    auto doc = html::parse(page);
    if (!has_landmark(doc, adapter))
      throw Error(ErrorCode::adapter_mismatch, "showcase page lacks the landmarks of adapter '" + adapter.name + "'");
    for (auto node : html::Selector(adapter.listing->item).select(doc)) {
      auto name = adapter.listing->field(doc, node, "name");
      if (!name || name->empty()) {
        out.warnings.push_back("product card without a name");
        continue;
      }
      ShopListing l;
      l.name = *name;
      if (auto price_text = adapter.listing->field(doc, node, "price")) {
        auto [price, currency] = parse_price(*price_text);
        l.price = price;
        l.currency = currency;
      }
      if (auto cur = adapter.listing->field(doc, node, "currency"); cur && !cur->empty()) l.currency = *cur;
      if (auto unit = adapter.listing->field(doc, node, "unit"); unit && !unit->empty()) l.unit = *unit;
      if (!seen.emplace(l.name, l.unit.value_or("")).second) continue;
      out.snapshot.listings.push_back(std::move(l));
    }
  }
  out.empty_showcase = out.snapshot.listings.empty();
  return out;
}

}  // namespace infoveil::ingest
