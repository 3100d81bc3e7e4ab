// SPDX-License-Identifier: Apache-2.0
#pragma once

// Pushes a generated fixture through the real ingestion path: rendered forum
// pages through the site adapters, the recorded stream through the keyword
// filter, shop dumps through the weekly snapshot job, then the index build.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fixture.hpp"
#include "infoveil/ingest/adapter.hpp"
#include "infoveil/service/operations.hpp"
#include "infoveil/service/store.hpp"
#include "render.hpp"

namespace fixture {

namespace fs = std::filesystem;

struct StoreBuild {
  fs::path root;
  std::vector<service::IngestReport> forum_reports;
  std::vector<std::string> page_errors;
  std::size_t post_blocks = 0;  // post elements across all rendered pages
  service::IngestReport stream_report;
  ingest::StreamStats stream_stats;
  std::vector<service::SnapshotReport> snapshot_reports;
  service::IndexReport index_report;
};

inline std::string adapter_for(SourceKind kind) {
  return kind == SourceKind::forum_bluelight_like ? "bluelight-like" : "drugsforum-like";
}

/// Raw inputs under `work/`: pages/<forum>/, stream.jsonl, dumps/<date>/.
inline void write_inputs(const Fixture& fx, const fs::path& work) {
  for (const auto& f : fx.corpus.forums) render::write_forum(f, work / "pages" / f.id);
  service::write_atomic(work / "stream.jsonl", render::stream_jsonl(fx.corpus.tweets));
  for (auto d : fx.capture_days) render::write_shop_dumps(fx.corpus, d, work / "dumps" / format_date(d));
}

inline StoreBuild ingest_inputs(const Fixture& fx, const fs::path& work, const fs::path& root) {
  StoreBuild out;
  out.root = root;
  service::Store store(root);
  auto config = store.config();
  ingest::AdapterRegistry adapters;
  for (const auto& f : fx.corpus.forums) {
    auto pages = service::input_files(work / "pages" / f.id, ".html");
    for (const auto& p : pages) {
      auto text = service::read_file(p);
      for (std::size_t pos = 0; (pos = text.find(f.kind == SourceKind::forum_bluelight_like ? "class=\"postbit\""
                                                                                             : "class=\"message ",
                                                pos)) != std::string::npos;
           ++pos)
        ++out.post_blocks;
    }
    auto batch = service::records_from_pages(pages, adapters.get(adapter_for(f.kind)), f.id, fx.captured_at);
    out.page_errors.insert(out.page_errors.end(), batch.errors.begin(), batch.errors.end());
    out.forum_reports.push_back(store.ingest(batch.records, f.id));
  }
  auto stream = service::records_from_stream(work / "stream.jsonl", config.keywords(), fx.captured_at);
  out.stream_stats = stream.stats;
  out.stream_report = store.ingest(stream.records, "twitter");
  for (auto d : fx.capture_days) {
    ingest::VirtualClock clock;
    out.snapshot_reports.push_back(service::snapshot_shops(
        store, config, adapters, ingest::local_dump_fetcher(work / "dumps" / format_date(d)), clock, d));
  }
  out.index_report = store.build_index();
  return out;
}

/// Fresh store at `work/store` built from the fixture's rendered inputs.
inline StoreBuild build_store(const Fixture& fx, const fs::path& work) {
  fs::remove_all(work);
  write_inputs(fx, work);
  return ingest_inputs(fx, work, work / "store");
}

inline std::string scratch_suffix() { return "-" + std::to_string(::getpid()); }

inline fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("infoveil-test-" + name + scratch_suffix());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// Removes every scratch directory this process created.
inline void remove_scratch_dirs() {
  std::vector<fs::path> mine;
  for (const auto& e : fs::directory_iterator(fs::temp_directory_path())) {
    auto name = e.path().filename().string();
    if (name.starts_with("infoveil-test-") && name.ends_with(scratch_suffix())) mine.push_back(e.path());
  }
  for (const auto& p : mine) fs::remove_all(p);
}

}  // namespace fixture
