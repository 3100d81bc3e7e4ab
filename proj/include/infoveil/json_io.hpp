// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "infoveil/corpus.hpp"

// JSON forms of the corpus records. Field names follow the record types;
// timestamps are ISO-8601 UTC strings and dates are YYYY-MM-DD.

namespace infoveil {

using json = nlohmann::json;

namespace detail {

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v)
    j[key] = *v;
  else
    j[key] = nullptr;
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->template get<T>();
}

inline Timestamp get_ts(const json& j, const char* key) { return parse_timestamp(j.at(key).get<std::string>()); }

}  // namespace detail

inline void to_json(json& j, const SectionNode& s) {
  j = json{{"id", s.id}, {"name", s.name}, {"depth", s.depth}, {"children", s.children}};
  detail::put_optional(j, "parent_id", s.parent_id);
}
inline void from_json(const json& j, SectionNode& s) {
  s.id = j.at("id").get<std::string>();
  s.name = j.value("name", std::string{});
  s.parent_id = detail::get_optional<std::string>(j, "parent_id");
  s.depth = j.value("depth", 0);
  s.children = j.value("children", std::vector<std::string>{});
}

inline void to_json(json& j, const Thread& t) {
  j = json{{"id", t.id},
           {"forum_id", t.forum_id},
           {"section_id", t.section_id},
           {"title", t.title},
           {"created_at", format_timestamp(t.created_at)}};
}
inline void from_json(const json& j, Thread& t) {
  t.id = j.at("id").get<std::string>();
  t.forum_id = j.at("forum_id").get<std::string>();
  t.section_id = j.at("section_id").get<std::string>();
  t.title = j.value("title", std::string{});
  t.created_at = detail::get_ts(j, "created_at");
}

inline void to_json(json& j, const Post& p) {
  j = json{{"id", p.id},
           {"thread_id", p.thread_id},
           {"author_id", p.author_id},
           {"created_at", format_timestamp(p.created_at)},
           {"text", p.text}};
}
inline void from_json(const json& j, Post& p) {
  p.id = j.at("id").get<std::string>();
  p.thread_id = j.at("thread_id").get<std::string>();
  p.author_id = j.at("author_id").get<std::string>();
  p.created_at = detail::get_ts(j, "created_at");
  p.text = j.value("text", std::string{});
}

inline void to_json(json& j, const UserProfile& u) {
  j = json{{"id", u.id}, {"forum_id", u.forum_id}, {"handle", u.handle}, {"post_count", u.post_count}};
  detail::put_optional(j, "location_raw", u.location_raw);
}
inline void from_json(const json& j, UserProfile& u) {
  u.id = j.at("id").get<std::string>();
  u.forum_id = j.at("forum_id").get<std::string>();
  u.handle = j.value("handle", std::string{});
  u.location_raw = detail::get_optional<std::string>(j, "location_raw");
  u.post_count = j.value("post_count", 0);
}

inline void to_json(json& j, const Tweet& t) {
  j = json{{"id", t.id},
           {"created_at", format_timestamp(t.created_at)},
           {"author_handle", t.author_handle},
           {"text", t.text},
           {"matched_keywords", t.matched_keywords}};
}
inline void from_json(const json& j, Tweet& t) {
  t.id = j.at("id").get<std::string>();
  t.created_at = detail::get_ts(j, "created_at");
  t.author_handle = j.value("author_handle", std::string{});
  t.text = j.value("text", std::string{});
  t.matched_keywords = j.value("matched_keywords", std::vector<std::string>{});
}

inline void to_json(json& j, const ShopListing& l) {
  j = json{{"name", l.name}};
  detail::put_optional(j, "price", l.price);
  detail::put_optional(j, "currency", l.currency);
  detail::put_optional(j, "unit", l.unit);
}
inline void from_json(const json& j, ShopListing& l) {
  l.name = j.at("name").get<std::string>();
  l.price = detail::get_optional<double>(j, "price");
  l.currency = detail::get_optional<std::string>(j, "currency");
  l.unit = detail::get_optional<std::string>(j, "unit");
}

inline void to_json(json& j, const ShopSnapshot& s) {
  j = json{{"shop_id", s.shop_id},
           {"domain", s.domain},
           {"captured_at", format_date(s.captured_at)},
           {"listings", s.listings}};
}
inline void from_json(const json& j, ShopSnapshot& s) {
  s.shop_id = j.at("shop_id").get<int>();
  s.domain = j.at("domain").get<std::string>();
  s.captured_at = std::chrono::floor<std::chrono::days>(detail::get_ts(j, "captured_at"));
  s.listings = j.value("listings", std::vector<ShopListing>{});
}

}  // namespace infoveil
