// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "infoveil/ingest/adapter.hpp"
#include "infoveil/ingest/fetch.hpp"
#include "infoveil/ingest/stream.hpp"
#include "infoveil/service/store.hpp"

// Batch jobs behind the CLI: page/stream/archive ingestion and the weekly
// shop snapshot run.

namespace infoveil::service {

/// Input files for ingestion: a single file, or every regular file in a
/// directory (recursively) with the given extension, in path order.
inline std::vector<fs::path> input_files(const fs::path& input, const std::string& extension) {
  if (!fs::exists(input)) throw Error(ErrorCode::io_failure, "input " + input.string() + " does not exist");
  if (!fs::is_directory(input)) return {input};
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(input))
    if (e.is_regular_file() && e.path().extension() == extension) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

struct PageBatch {
  std::vector<ingest::ArchiveRecord> records;
  std::vector<std::string> errors;
};

/// Runs a forum adapter over saved pages. A page that fails (malformed or
/// belonging to another site) is reported and the batch continues.
inline PageBatch records_from_pages(const std::vector<fs::path>& pages, const ingest::SiteAdapter& adapter,
                                    const std::string& forum_id, Timestamp captured_at) {
  PageBatch batch;
  for (const auto& page : pages) {
    try {
      auto ex = ingest::extract_forum_records(read_file(page), adapter, ingest::PageContext{forum_id, captured_at});
      batch.records.insert(batch.records.end(), ex.records.begin(), ex.records.end());
      for (const auto& w : ex.warnings) batch.errors.push_back(page.filename().string() + ": " + w);
    } catch (const Error& e) {
      batch.errors.push_back(page.filename().string() + ": " + std::string(to_string(e.code())) + ": " + e.what());
    }
  }
  return batch;
}

struct StreamBatch {
  std::vector<ingest::ArchiveRecord> records;
  ingest::StreamStats stats;
};

/// Keyword-filters a recorded stream. The buffer is sized to the whole file
/// so replaying a recording never drops records.
inline StreamBatch records_from_stream(const fs::path& file, const std::set<std::string>& keywords,
                                       Timestamp ingested_at) {
  auto text = read_file(file);
  std::size_t lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) + 1;
  std::istringstream in(text);
  StreamBatch batch;
  batch.stats = ingest::ingest_stream(
      in, keywords,
      [&](Tweet t) {
        batch.records.push_back(
            ingest::ArchiveRecord{ingest::RecordType::tweet, std::string(microblog_source), std::move(t), ingested_at});
      },
      lines);
  return batch;
}

struct ShopFailure {
  int shop_id = 0;
  std::string domain;
  std::string code;
  std::string message;
};

struct SnapshotReport {
  std::vector<int> created;     // shop ids
  std::vector<int> duplicates;  // shop ids already captured that day
  std::vector<ShopFailure> failures;
  std::vector<std::string> warnings;
  std::size_t requests = 0;
};

inline void to_json(json& j, const ShopFailure& f) {
  j = json{{"shop_id", f.shop_id}, {"domain", f.domain}, {"code", f.code}, {"message", f.message}};
}

inline void to_json(json& j, const SnapshotReport& r) {
  j = json{{"created", r.created},   {"duplicates", r.duplicates}, {"failures", r.failures},
           {"warnings", r.warnings}, {"requests", r.requests}};
}

/// One snapshot per configured shop for `day`. Shops already captured that
/// day are skipped (DuplicateSnapshot); a shop whose pages cannot be fetched
/// or read is reported (FetchFailure) without stopping the run.
inline SnapshotReport snapshot_shops(Store& store, const Config& config, const ingest::AdapterRegistry& adapters,
                                     const ingest::Fetcher& fetcher, ingest::Clock& clock, Date day) {
  SnapshotReport report;
  std::vector<const ingest::ShopDescriptor*> pending;
  std::vector<std::string> urls;
  for (const auto& shop : config.shops) {
    if (store.has_snapshot(shop.shop_id, day)) {
      report.duplicates.push_back(shop.shop_id);
      continue;
    }
    pending.push_back(&shop);
    urls.insert(urls.end(), shop.showcase_urls.begin(), shop.showcase_urls.end());
  }
  auto run = ingest::schedule_fetch(urls, config.fetch, fetcher, clock);
  report.requests = run.log.size();
  for (const auto* shop : pending) {
    auto fail = [&](ErrorCode code, std::string message) {
      report.failures.push_back(ShopFailure{shop->shop_id, shop->domain, std::string(to_string(code)), std::move(message)});
    };
    std::vector<std::string> pages;
    std::string fetch_error;
    for (const auto& url : shop->showcase_urls) {
      const auto& outcome = run.outcomes.at(url);
      if (!outcome.ok) fetch_error = url + ": " + outcome.error;
      pages.push_back(outcome.body);
    }
    if (!fetch_error.empty()) {
      fail(ErrorCode::fetch_failure, fetch_error);
      continue;
    }
    try {
      auto ex = ingest::extract_shop_snapshot(pages, *shop, day, adapters.get(shop->adapter));
      for (const auto& w : ex.warnings) report.warnings.push_back(shop->domain + ": " + w);
      if (ex.empty_showcase) report.warnings.push_back(shop->domain + ": empty showcase");
      store.insert_snapshot(ex.snapshot);
      report.created.push_back(shop->shop_id);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::duplicate_snapshot)
        report.duplicates.push_back(shop->shop_id);
      else
        fail(e.code() == ErrorCode::unknown_adapter ? e.code() : ErrorCode::fetch_failure,
             std::string(to_string(e.code())) + ": " + e.what());
    }
  }
  return report;
}

}  // namespace infoveil::service
