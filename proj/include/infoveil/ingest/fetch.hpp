// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "infoveil/error.hpp"
#include "infoveil/unicode.hpp"

namespace infoveil::ingest {

using Millis = std::chrono::milliseconds;

struct FetchPolicy {
  Millis min_delay_per_host{2000};
  std::size_t max_concurrent_hosts = 4;
  int max_retries = 2;
  Millis backoff_base{2000};
  std::chrono::hours revisit_interval{24 * 7};

  void validate() const {
    if (min_delay_per_host <= Millis::zero()) throw Error(ErrorCode::validation, "min_delay_per_host must be positive");
    if (max_concurrent_hosts == 0) throw Error(ErrorCode::validation, "max_concurrent_hosts must be positive");
    if (max_retries < 0) throw Error(ErrorCode::validation, "max_retries must be non-negative");
  }
};

/// Time source for the scheduler. Instants are offsets from the start of a run.
class Clock {
public:
  virtual ~Clock() = default;
  virtual Millis now() = 0;
  virtual void sleep_until(Millis t) = 0;
};

class SteadyClock final : public Clock {
public:
  SteadyClock() : start_(std::chrono::steady_clock::now()) {}
  Millis now() override {
    return std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() - start_);
  }
  void sleep_until(Millis t) override { std::this_thread::sleep_until(start_ + t); }

private:
  std::chrono::steady_clock::time_point start_;
};

/// Simulated time: each worker thread has its own timeline that only moves
/// when it sleeps, so runs are instant and reproducible.
class VirtualClock final : public Clock {
public:
  Millis now() override {
    std::lock_guard lock(mutex_);
    return cursor_[std::this_thread::get_id()];
  }
  void sleep_until(Millis t) override {
    std::lock_guard lock(mutex_);
    auto& c = cursor_[std::this_thread::get_id()];
    c = std::max(c, t);
  }

private:
  std::mutex mutex_;
  std::map<std::thread::id, Millis> cursor_;
};

struct FetchResult {
  bool ok = false;
  std::string body;
  std::string error;
};

using Fetcher = std::function<FetchResult(const std::string& url)>;

struct FetchLogEntry {
  std::string url;
  std::string host;
  int attempt = 1;
  Millis at{};
  bool ok = false;
  std::string error;
};

struct FetchOutcome {
  std::string url;
  bool ok = false;
  int attempts = 0;
  std::string body;
  std::string error;  // "HostUnreachable: ..." after the last retry
};

struct FetchRun {
  std::vector<FetchLogEntry> log;         // ordered by time, then host
  std::map<std::string, FetchOutcome> outcomes;  // by url

  /// Smallest gap between consecutive requests to the same host, if any host
  /// saw two requests.
  std::optional<Millis> min_same_host_gap() const {
    std::map<std::string, Millis> last;
    std::optional<Millis> best;
    for (const auto& e : log) {
      auto it = last.find(e.host);
      if (it != last.end()) {
        auto gap = e.at - it->second;
        if (!best || gap < *best) best = gap;
      }
      last[e.host] = e.at;
    }
    return best;
  }

  Millis span() const {
    if (log.empty()) return Millis::zero();
    return log.back().at - log.front().at;
  }
};

/// Lower-cased host[:port] of an absolute http(s) URL; empty if invalid.
inline std::string url_host(std::string_view url) {
  auto scheme = url.find("://");
  if (scheme == std::string_view::npos) return {};
  auto proto = unicode::fold(url.substr(0, scheme));
  if (proto != "http" && proto != "https") return {};
  auto rest = url.substr(scheme + 3);
  auto host = std::string(rest.substr(0, rest.find_first_of("/?#")));
  for (auto& c : host)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  return host;
}

/// Fetches every URL, serialising requests per host with at least
/// `min_delay_per_host` between them and working on up to
/// `max_concurrent_hosts` hosts at once. Failed requests are retried up to
/// `max_retries` times with exponential backoff; a URL that still fails is
/// marked HostUnreachable and the run continues.
inline FetchRun schedule_fetch(const std::vector<std::string>& urls, const FetchPolicy& policy,
                               const Fetcher& fetch, Clock& clock) {
  policy.validate();
  FetchRun run;
  std::map<std::string, std::vector<std::string>> by_host;
  for (const auto& u : urls) {
    auto host = url_host(u);
    if (host.empty()) {
      run.outcomes[u] = FetchOutcome{u, false, 0, {}, "invalid url"};
      continue;
    }
    auto& list = by_host[host];
    if (std::find(list.begin(), list.end(), u) == list.end()) list.push_back(u);
  }
  std::vector<std::string> hosts;
  for (const auto& [h, _] : by_host) hosts.push_back(h);

  std::mutex mutex;
  std::size_t next_host = 0;
  auto worker = [&] {
    while (true) {
      std::string host;
      {
        std::lock_guard lock(mutex);
        if (next_host == hosts.size()) return;
        host = hosts[next_host++];
      }
      std::optional<Millis> last_request;
      for (const auto& url : by_host[host]) {
        FetchOutcome outcome{url, false, 0, {}, {}};
        for (int attempt = 1; attempt <= policy.max_retries + 1; ++attempt) {
          Millis earliest = clock.now();
          if (last_request) {
            Millis wait = policy.min_delay_per_host;
            if (attempt > 1) wait = std::max(wait, policy.backoff_base * (1 << (attempt - 2)));
            earliest = std::max(earliest, *last_request + wait);
          }
          clock.sleep_until(earliest);
          Millis at = clock.now();
          last_request = at;
          FetchResult r = fetch(url);
          outcome.attempts = attempt;
          {
            std::lock_guard lock(mutex);
            run.log.push_back(FetchLogEntry{url, host, attempt, at, r.ok, r.error});
          }
          if (r.ok) {
            outcome.ok = true;
            outcome.body = std::move(r.body);
            outcome.error.clear();
            break;
          }
          outcome.error = "HostUnreachable: " + r.error;
        }
        std::lock_guard lock(mutex);
        run.outcomes[url] = std::move(outcome);
      }
    }
  };
  std::size_t workers = std::min(policy.max_concurrent_hosts, hosts.size());
  std::vector<std::thread> threads;
  for (std::size_t i = 1; i < workers; ++i) threads.emplace_back(worker);
  if (workers > 0) worker();
  for (auto& t : threads) t.join();
  std::stable_sort(run.log.begin(), run.log.end(),
                   [](const auto& a, const auto& b) { return std::tie(a.at, a.host) < std::tie(b.at, b.host); });
  return run;
}

/// Maps a URL onto a saved page dump: `<root>/<host>/<path>`, with
/// "index.html" standing in for directory paths and '?' replaced by '_'.
inline std::filesystem::path dump_path(const std::filesystem::path& root, const std::string& url) {
  auto host = url_host(url);
  auto scheme = url.find("://");
  std::string path = url.substr(scheme + 3);
  auto slash = path.find('/');
  path = slash == std::string::npos ? std::string{} : path.substr(slash + 1);
  if (auto hash = path.find('#'); hash != std::string::npos) path.erase(hash);
  std::replace(path.begin(), path.end(), '?', '_');
  if (path.empty() || path.back() == '/') path += "index.html";
  return root / host / path;
}

/// Default, offline fetcher: reads page dumps instead of the network.
inline Fetcher local_dump_fetcher(std::filesystem::path root) {
  return [root = std::move(root)](const std::string& url) {
    auto path = dump_path(root, url);
    std::ifstream in(path, std::ios::binary);
    if (!in) return FetchResult{false, {}, "no dump at " + path.string()};
    std::ostringstream ss;
    ss << in.rdbuf();
    return FetchResult{true, ss.str(), {}};
  };
}

}  // namespace infoveil::ingest
