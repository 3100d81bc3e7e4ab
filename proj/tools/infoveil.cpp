// SPDX-License-Identifier: Apache-2.0
// infoveil: command-line front end (ingest, index, snapshot-shops, analyze, serve).

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "infoveil/service/api.hpp"
#include "infoveil/service/live_fetch.hpp"
#include "infoveil/service/operations.hpp"
#include "infoveil/service/server.hpp"

using namespace infoveil;
using namespace infoveil::service;

namespace {

Timestamp now_utc() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

int fail(const std::string& code, const std::string& message) {
  std::cerr << "error: " << code << ": " << message << "\n";
  return 1;
}

// analyze subcommands map one-to-one onto API endpoints.
struct AnalyzeSpec {
  const char* name;
  const char* path;
  std::vector<const char*> params;
  const char* help;
};

const std::vector<AnalyzeSpec> analyze_table = {
    {"sources", "/api/v1/sources", {}, "sources with document counts and time spans"},
    {"treemap", "/api/v1/forums/{forum}/treemap", {"forum"}, "section tree with post counts"},
    {"trend", "/api/v1/trend", {"term", "source", "section", "bucket"}, "normalized term frequency over time"},
    {"horizon", "/api/v1/horizon", {"term", "forum", "depth", "bucket"}, "per-section trends at one depth"},
    {"cooccur", "/api/v1/cooccur", {"term", "source", "top", "offset"}, "co-occurring terms"},
    {"neologisms", "/api/v1/neologisms", {"source", "after", "min_count", "top", "offset"}, "terms new after a date"},
    {"geo", "/api/v1/geo", {"forum"}, "users per country"},
    {"distfit", "/api/v1/distfit", {"forum", "metric"}, "heavy-tail fits of forum activity"},
    {"substances", "/api/v1/substances", {}, "per-substance activity across sources"},
    {"links", "/api/v1/links/overlap", {}, "linked-domain overlap between sources"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"infoveil: infoveillance engine for drug forums, shops and microblog streams"};
  app.require_subcommand(1);
  std::string store_dir;
  app.add_option("--store", store_dir, "store directory (default: $INFOVEIL_STORE or ./store)");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "append source material to the store archives");
  std::string adapter_name, input, forum_id, captured_at, keywords_file;
  ingest_cmd->add_option("--adapter", adapter_name, "forum adapter name, 'archive' (JSONL dump) or 'stream'")
      ->required();
  ingest_cmd->add_option("--input", input, "file or directory")->required();
  ingest_cmd->add_option("--forum", forum_id, "forum id for page adapters");
  ingest_cmd->add_option("--captured-at", captured_at, "page capture time (ISO-8601, default now)");
  ingest_cmd->add_option("--keywords", keywords_file, "keyword list for 'stream' (default from config)");

  // index
  auto* index_cmd = app.add_subcommand("index", "rebuild the term index artifact");

  // snapshot-shops
  auto* snap_cmd = app.add_subcommand("snapshot-shops", "capture one snapshot per configured shop");
  std::string dumps_dir, snap_date;
  bool live = false;
  snap_cmd->add_option("--dumps", dumps_dir, "directory of saved showcase pages (default <store>/pages)");
  snap_cmd->add_option("--date", snap_date, "capture date YYYY-MM-DD (default today, UTC)");
  snap_cmd->add_flag("--live", live, "fetch from the network instead of saved pages");

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "print an analysis as the API would return it");
  analyze_cmd->require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> analyze_values;
  std::string histogram_file;
  for (const auto& spec : analyze_table) {
    auto* sub = analyze_cmd->add_subcommand(spec.name, spec.help);
    for (const char* p : spec.params) sub->add_option(std::string("--") + p, analyze_values[spec.name][p]);
    if (std::string(spec.name) == "distfit")
      sub->add_option("--histogram", histogram_file, "fit a file of integers (one per line) instead of a forum");
  }

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "serve the JSON API");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve_cmd->add_option("--port", port, "TCP port");
  serve_cmd->add_option("--host", host, "bind address");

  CLI11_PARSE(app, argc, argv);

  try {
    auto root = resolve_store_root(store_dir);

    if (*ingest_cmd) {
      Store store(root);
      auto config = store.config();
      ingest::AdapterRegistry adapters;
      if (config.adapters_dir) adapters.load_directory(*config.adapters_dir);
      Timestamp ingested_at = now_utc();
      std::vector<ingest::ArchiveRecord> records;
      std::vector<std::string> errors;
      json extra = json::object();
      if (adapter_name == "archive") {
        for (const auto& f : input_files(input, ".jsonl")) {
          auto part = ingest::read_jsonl_file(f.string());
          records.insert(records.end(), part.begin(), part.end());
        }
      } else if (adapter_name == "stream") {
        std::set<std::string> keywords;
        if (!keywords_file.empty()) {
          std::ifstream in(keywords_file);
          if (!in) return fail("IoFailure", "cannot read " + keywords_file);
          keywords = ingest::read_keywords(in);
        } else {
          keywords = config.keywords();
        }
        for (const auto& f : input_files(input, ".jsonl")) {
          auto batch = records_from_stream(f, keywords, ingested_at);
          records.insert(records.end(), batch.records.begin(), batch.records.end());
          extra["stream"] = json{{"received", batch.stats.received},   {"emitted", batch.stats.emitted},
                                 {"unmatched", batch.stats.unmatched}, {"malformed", batch.stats.malformed},
                                 {"overflow_dropped", batch.stats.overflow_dropped}};
        }
      } else {
        const auto& adapter = adapters.get(adapter_name);
        if (forum_id.empty()) return fail("Validation", "--forum is required for page adapters");
        Timestamp when = captured_at.empty() ? ingested_at : parse_timestamp(captured_at);
        auto batch = records_from_pages(input_files(input, ".html"), adapter, forum_id, when);
        records = std::move(batch.records);
        errors = std::move(batch.errors);
      }
      auto report = store.ingest(records, adapter_name);
      report.errors.insert(report.errors.begin(), errors.begin(), errors.end());
      json out = report;
      out["posts"] = report.posts();
      out.update(extra);
      print(out);
      return 0;
    }

    if (*index_cmd) {
      Store store(root);
      print(json(store.build_index()));
      return 0;
    }

    if (*snap_cmd) {
      Store store(root);
      auto config = store.config();
      ingest::AdapterRegistry adapters;
      if (config.adapters_dir) adapters.load_directory(*config.adapters_dir);
      Date day = std::chrono::floor<std::chrono::days>(now_utc());
      if (!snap_date.empty()) {
        auto d = try_parse_date(snap_date);
        if (!d) return fail("Validation", "--date must be YYYY-MM-DD");
        day = *d;
      }
      auto fetcher = live ? http_fetcher()
                          : ingest::local_dump_fetcher(dumps_dir.empty() ? root / "pages" : fs::path(dumps_dir));
      ingest::SteadyClock clock;
      print(json(snapshot_shops(store, config, adapters, fetcher, clock, day)));
      return 0;
    }

    if (*analyze_cmd) {
      for (const auto& spec : analyze_table) {
        auto* sub = analyze_cmd->get_subcommand(spec.name);
        if (!*sub) continue;
        if (std::string(spec.name) == "distfit" && !histogram_file.empty()) {
          std::ifstream in(histogram_file);
          if (!in) return fail("IoFailure", "cannot read " + histogram_file);
          std::vector<std::int64_t> values;
          for (std::string line; std::getline(in, line);) {
            auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos || line[b] == '#') continue;
            values.push_back(std::stoll(line.substr(b)));
          }
          heavytail::Sample sample(values);
          json out = json(heavytail::model_ordering(sample));
          out["n"] = sample.n();
          print(out);
          return 0;
        }
        std::string path = spec.path;
        Params params;
        for (const char* p : spec.params) {
          const auto& v = analyze_values[spec.name][p];
          if (sub->count(std::string("--") + p) == 0) continue;
          if (std::string(p) == "forum" && path.find("{forum}") != std::string::npos)
            path.replace(path.find("{forum}"), 7, v);
          else
            params.emplace(p, v);
        }
        Store store(root);
        Api api(load_generation(store));
        auto r = api.handle(path, params);
        print(r.body);
        return r.status == 200 ? 0 : 1;
      }
    }

    if (*serve_cmd) {
      Store store(root);
      Api api(load_generation(store));
      Server server(api, [&store] { return load_generation(store); });
      std::cerr << "serving " << root << " on http://" << host << ":" << port << "\n";
      return server.listen(host, port) ? 0 : fail("IoFailure", "cannot listen on port " + std::to_string(port));
    }
  } catch (const Error& e) {
    return fail(std::string(to_string(e.code())), e.what());
  } catch (const std::exception& e) {
    return fail("Internal", e.what());
  }
  return 0;
}
