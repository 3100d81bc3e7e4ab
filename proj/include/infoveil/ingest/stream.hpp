// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <istream>
#include <mutex>
#include <set>
#include <thread>

#include "infoveil/json_io.hpp"

namespace infoveil::ingest {

/// A raw microblog record before keyword filtering.
struct StreamRecord {
  std::string id;
  Timestamp created_at{};
  std::string author_handle;
  std::string text;
};

inline void from_json(const json& j, StreamRecord& r) {
  r.id = j.at("id").get<std::string>();
  r.created_at = parse_timestamp(j.at("created_at").get<std::string>());
  r.author_handle = j.value("author_handle", std::string{});
  r.text = j.value("text", std::string{});
}

/// Keeps records whose tokens hit at least one keyword.
class KeywordFilter {
public:
  explicit KeywordFilter(const std::set<std::string>& keywords) {
    for (const auto& k : keywords) {
      auto term = normalize_term(k);
      if (!term.empty()) keywords_.insert(term);
    }
    if (keywords_.empty()) throw Error(ErrorCode::validation, "keyword set is empty");
  }

  const std::set<std::string>& keywords() const { return keywords_; }

  std::optional<Tweet> match(const StreamRecord& r) const {
    std::vector<std::string> hits;
    for (const auto& t : token_set(r.text))
      if (keywords_.contains(t)) hits.push_back(t);
    if (hits.empty()) return std::nullopt;
    return Tweet{r.id, r.created_at, r.author_handle, r.text, std::move(hits)};
  }

private:
  std::set<std::string> keywords_;
};

/// Reads a keyword list: one term per line; blank lines and '#' comments skipped.
inline std::set<std::string> read_keywords(std::istream& in) {
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    out.insert(line.substr(b, e - b + 1));
  }
  return out;
}

/// Fixed-capacity FIFO between a producer and a consumer. When full, the
/// oldest queued item is discarded and counted.
template <class T>
class BoundedBuffer {
public:
  explicit BoundedBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw Error(ErrorCode::validation, "buffer capacity must be positive");
  }

  void push(T item) {
    {
      std::lock_guard lock(mutex_);
      if (items_.size() == capacity_) {
        items_.pop_front();
        ++dropped_;
      }
      items_.push_back(std::move(item));
    }
    ready_.notify_one();
  }

  /// Blocks until an item is available or the buffer is closed and drained.
  std::optional<T> pop() {
    std::unique_lock lock(mutex_);
    ready_.wait(lock, [&] { return !items_.empty() || closed_; });
    if (items_.empty()) return std::nullopt;
    T item = std::move(items_.front());
    items_.pop_front();
    return item;
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    ready_.notify_all();
  }

  std::size_t dropped() const {
    std::lock_guard lock(mutex_);
    return dropped_;
  }

private:
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<T> items_;
  std::size_t dropped_ = 0;
  bool closed_ = false;
};

struct StreamStats {
  std::size_t received = 0;
  std::size_t emitted = 0;
  std::size_t unmatched = 0;
  std::size_t malformed = 0;
  std::size_t overflow_dropped = 0;  // BackpressureOverflow events
};

/// Filters a JSON Lines record stream by keyword. A reader thread feeds a
/// bounded buffer; the calling thread filters and hands each Tweet to `sink`.
inline StreamStats ingest_stream(std::istream& records, const std::set<std::string>& keywords,
                                 const std::function<void(Tweet)>& sink, std::size_t capacity = 4096) {
  KeywordFilter filter(keywords);
  BoundedBuffer<std::string> buffer(capacity);
  StreamStats stats;
  std::thread reader([&] {
    std::string line;
    while (std::getline(records, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      buffer.push(std::move(line));
    }
    buffer.close();
  });
  while (auto line = buffer.pop()) {
    ++stats.received;
    StreamRecord rec;
    try {
      rec = json::parse(*line).get<StreamRecord>();
    } catch (const std::exception&) {
      ++stats.malformed;
      continue;
    }
    if (auto tweet = filter.match(rec)) {
      ++stats.emitted;
      sink(std::move(*tweet));
    } else {
      ++stats.unmatched;
    }
  }
  reader.join();
  stats.overflow_dropped = buffer.dropped();
  return stats;
}

}  // namespace infoveil::ingest
