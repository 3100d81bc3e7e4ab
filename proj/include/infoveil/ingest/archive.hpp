// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "infoveil/json_io.hpp"

namespace infoveil::ingest {

enum class RecordType { section, thread, post, user, listing_snapshot, tweet };

constexpr std::string_view to_string(RecordType t) {
  switch (t) {
    case RecordType::section: return "section";
    case RecordType::thread: return "thread";
    case RecordType::post: return "post";
    case RecordType::user: return "user";
    case RecordType::listing_snapshot: return "listing_snapshot";
    case RecordType::tweet: return "tweet";
  }
  return "post";
}

inline std::optional<RecordType> parse_record_type(std::string_view s) {
  for (auto t : {RecordType::section, RecordType::thread, RecordType::post, RecordType::user,
                 RecordType::listing_snapshot, RecordType::tweet})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

using Payload = std::variant<SectionNode, Thread, Post, UserProfile, ShopSnapshot, Tweet>;

/// One line of a `*.jsonl` archive. `source` names the forum (or other source
/// tag) a record belongs to; section and post payloads do not carry it.
struct ArchiveRecord {
  RecordType record_type = RecordType::post;
  std::string source;
  Payload payload;
  Timestamp ingested_at{};

  bool operator==(const ArchiveRecord&) const = default;

  /// Identity used for idempotent ingestion.
  std::string key() const {
    auto id = std::visit(
        [](const auto& p) -> std::string {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ShopSnapshot>)
            return std::to_string(p.shop_id) + "@" + format_date(p.captured_at);
          else
            return p.id;
        },
        payload);
    return std::string(to_string(record_type)) + "/" + source + "/" + id;
  }
};

/// Throws a validation error when a payload breaks its type's invariants.
inline void validate(const ArchiveRecord& r) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::validation, std::string(to_string(r.record_type)) + " record: " + why);
  };
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ShopSnapshot>) {
          if (p.domain.empty()) fail("empty shop domain");
          for (const auto& l : p.listings) {
            if (l.name.empty()) fail("empty listing name");
            if (l.price && *l.price < 0) fail("negative price");
          }
        } else {
          if (p.id.empty()) fail("empty id");
          if constexpr (std::is_same_v<T, Tweet>) {
            if (p.matched_keywords.empty()) fail("tweet without matched keywords");
          } else if constexpr (std::is_same_v<T, Thread>) {
            if (p.section_id.empty()) fail("thread without section");
          } else if constexpr (std::is_same_v<T, Post>) {
            if (p.thread_id.empty()) fail("post without thread");
          } else if constexpr (std::is_same_v<T, SectionNode>) {
            if (p.depth < 0) fail("negative depth");
          }
        }
      },
      r.payload);
  bool type_ok = false;
  switch (r.record_type) {
    case RecordType::section: type_ok = std::holds_alternative<SectionNode>(r.payload); break;
    case RecordType::thread: type_ok = std::holds_alternative<Thread>(r.payload); break;
    case RecordType::post: type_ok = std::holds_alternative<Post>(r.payload); break;
    case RecordType::user: type_ok = std::holds_alternative<UserProfile>(r.payload); break;
    case RecordType::listing_snapshot: type_ok = std::holds_alternative<ShopSnapshot>(r.payload); break;
    case RecordType::tweet: type_ok = std::holds_alternative<Tweet>(r.payload); break;
  }
  if (!type_ok) fail("payload does not match record_type");
}

inline void to_json(json& j, const ArchiveRecord& r) {
  j = json::object();
  j["record_type"] = to_string(r.record_type);
  j["source"] = r.source;
  std::visit([&](const auto& p) { j["payload"] = p; }, r.payload);
  j["ingested_at"] = format_timestamp(r.ingested_at);
}

inline void from_json(const json& j, ArchiveRecord& r) {
  auto type = parse_record_type(j.at("record_type").get<std::string>());
  if (!type) throw Error(ErrorCode::validation, "unknown record_type " + j.at("record_type").dump());
  r.record_type = *type;
  r.source = j.value("source", std::string{});
  const auto& p = j.at("payload");
  switch (*type) {
    case RecordType::section: r.payload = p.get<SectionNode>(); break;
    case RecordType::thread: r.payload = p.get<Thread>(); break;
    case RecordType::post: r.payload = p.get<Post>(); break;
    case RecordType::user: r.payload = p.get<UserProfile>(); break;
    case RecordType::listing_snapshot: r.payload = p.get<ShopSnapshot>(); break;
    case RecordType::tweet: r.payload = p.get<Tweet>(); break;
  }
  r.ingested_at = parse_timestamp(j.at("ingested_at").get<std::string>());
}

/// Appends records as JSON Lines. Every record is validated first.
inline void write_jsonl(std::ostream& out, const std::vector<ArchiveRecord>& records) {
  for (const auto& r : records) {
    validate(r);
    out << json(r).dump() << '\n';
  }
}

/// Reads a JSON Lines archive. Blank lines are ignored; a malformed line
/// throws with its line number.
inline std::vector<ArchiveRecord> read_jsonl(std::istream& in, const std::string& name = "archive") {
  std::vector<ArchiveRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto rec = json::parse(line).get<ArchiveRecord>();
      validate(rec);
      out.push_back(std::move(rec));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::validation, name + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<ArchiveRecord> read_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path);
  return read_jsonl(in, path);
}

}  // namespace infoveil::ingest
