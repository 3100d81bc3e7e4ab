// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fcntl.h>
#include <sqlite3.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "infoveil/index.hpp"
#include "infoveil/ingest/archive.hpp"
#include "infoveil/ingest/assemble.hpp"
#include "infoveil/service/config.hpp"

namespace infoveil::service {

namespace fs = std::filesystem;

inline constexpr const char* store_env_var = "INFOVEIL_STORE";

/// Store directory from an explicit value, else $INFOVEIL_STORE, else "./store".
inline fs::path resolve_store_root(const std::string& explicit_root = {}) {
  if (!explicit_root.empty()) return explicit_root;
  if (const char* env = std::getenv(store_env_var); env && *env) return env;
  return "store";
}

/// Writes `content` to `path` so that readers see either the previous file
/// or the complete new one: temp file in the same directory, fsync, rename.
inline void write_atomic(const fs::path& path, std::string_view content) {
  fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error(ErrorCode::io_failure, "cannot create " + tmp.string());
  std::size_t done = 0;
  while (done < content.size()) {
    auto n = ::write(fd, content.data() + done, content.size() - done);
    if (n < 0) {
      ::close(fd);
      fs::remove(tmp);
      throw Error(ErrorCode::io_failure, "write failed for " + tmp.string());
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) throw Error(ErrorCode::io_failure, "fsync failed for " + tmp.string());
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io_failure, "rename to " + path.string() + " failed: " + ec.message());
  int dir = ::open(path.parent_path().c_str(), O_RDONLY | O_DIRECTORY);
  if (dir >= 0) {
    ::fsync(dir);
    ::close(dir);
  }
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace detail {

/// Minimal RAII over the sqlite3 C API.
class Db {
public:
  explicit Db(const fs::path& file) {
    if (sqlite3_open(file.c_str(), &db_) != SQLITE_OK) {
      std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
      sqlite3_close(db_);
      throw Error(ErrorCode::io_failure, "cannot open " + file.string() + ": " + msg);
    }
    sqlite3_busy_timeout(db_, 5000);
    exec("PRAGMA foreign_keys = ON");
  }
  ~Db() { sqlite3_close(db_); }
  Db(const Db&) = delete;
  Db& operator=(const Db&) = delete;

  void exec(const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
      std::string msg = err ? err : "?";
      sqlite3_free(err);
      throw Error(ErrorCode::io_failure, std::string("sqlite: ") + msg);
    }
  }

  class Stmt {
  public:
    Stmt(sqlite3* db, const char* sql) : db_(db) {
      if (sqlite3_prepare_v2(db, sql, -1, &s_, nullptr) != SQLITE_OK)
        throw Error(ErrorCode::io_failure, std::string("sqlite: ") + sqlite3_errmsg(db));
    }
    ~Stmt() { sqlite3_finalize(s_); }
    Stmt(const Stmt&) = delete;
    Stmt& operator=(const Stmt&) = delete;

    Stmt& bind(int i, std::int64_t v) { return check(sqlite3_bind_int64(s_, i, v)); }
    Stmt& bind(int i, double v) { return check(sqlite3_bind_double(s_, i, v)); }
    Stmt& bind(int i, const std::string& v) {
      return check(sqlite3_bind_text(s_, i, v.c_str(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    }
    template <class T>
    Stmt& bind(int i, const std::optional<T>& v) {
      if (v) return bind(i, *v);
      return check(sqlite3_bind_null(s_, i));
    }

    /// True while rows remain.
    bool step() {
      int rc = sqlite3_step(s_);
      if (rc == SQLITE_ROW) return true;
      if (rc == SQLITE_DONE) return false;
      throw Error(ErrorCode::io_failure, std::string("sqlite: ") + sqlite3_errmsg(db_));
    }

    void reset() {
      sqlite3_reset(s_);
      sqlite3_clear_bindings(s_);
    }

    std::int64_t integer(int col) const { return sqlite3_column_int64(s_, col); }
    std::string text(int col) const {
      auto p = sqlite3_column_text(s_, col);
      return p ? reinterpret_cast<const char*>(p) : "";
    }
    std::optional<std::string> opt_text(int col) const {
      if (sqlite3_column_type(s_, col) == SQLITE_NULL) return std::nullopt;
      return text(col);
    }
    std::optional<double> opt_real(int col) const {
      if (sqlite3_column_type(s_, col) == SQLITE_NULL) return std::nullopt;
      return sqlite3_column_double(s_, col);
    }

  private:
    Stmt& check(int rc) {
      if (rc != SQLITE_OK) throw Error(ErrorCode::io_failure, std::string("sqlite: ") + sqlite3_errmsg(db_));
      return *this;
    }
    sqlite3* db_;
    sqlite3_stmt* s_ = nullptr;
  };

  Stmt prepare(const char* sql) { return Stmt(db_, sql); }
  std::int64_t last_rowid() const { return sqlite3_last_insert_rowid(db_); }

private:
  sqlite3* db_ = nullptr;
};

inline constexpr const char* schema = R"sql(
CREATE TABLE IF NOT EXISTS shops (
  shop_id INTEGER PRIMARY KEY,
  domain TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS snapshots (
  snapshot_id INTEGER PRIMARY KEY,
  shop_id INTEGER NOT NULL REFERENCES shops(shop_id),
  captured_at TEXT NOT NULL,
  UNIQUE (shop_id, captured_at)
);
CREATE TABLE IF NOT EXISTS listings (
  listing_id INTEGER PRIMARY KEY,
  snapshot_id INTEGER NOT NULL REFERENCES snapshots(snapshot_id),
  position INTEGER NOT NULL,
  name TEXT NOT NULL,
  price REAL,
  currency TEXT,
  unit TEXT
);
)sql";

}  // namespace detail

struct IngestReport {
  std::size_t records_read = 0;
  std::size_t written = 0;
  std::size_t skipped = 0;    // documents (posts, tweets) already archived
  std::size_t unchanged = 0;  // other records identical to the archived state
  std::map<std::string, std::size_t> written_by_type;
  std::vector<std::string> errors;

  std::size_t posts() const { return count("post"); }
  std::size_t count(const std::string& type) const {
    auto it = written_by_type.find(type);
    return it == written_by_type.end() ? 0 : it->second;
  }
};

inline void to_json(json& j, const IngestReport& r) {
  j = json{{"records_read", r.records_read}, {"written", r.written},          {"skipped", r.skipped},
           {"unchanged", r.unchanged},       {"written_by_type", r.written_by_type}, {"errors", r.errors}};
}

struct IndexReport {
  std::size_t docs = 0;
  std::size_t vocabulary = 0;
  std::size_t sources = 0;
  std::string path;
};

inline void to_json(json& j, const IndexReport& r) {
  j = json{{"docs", r.docs}, {"vocabulary", r.vocabulary}, {"sources", r.sources}, {"path", r.path}};
}

/// On-disk state: `archives/*.jsonl` (append-only, one file per ingest run),
/// `shops.sqlite` (shops, snapshots, listings), `index/index.artifact`, and
/// an optional `config.ini`.
class Store {
public:
  explicit Store(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(archives_dir(), ec);
    if (ec) throw Error(ErrorCode::io_failure, "cannot create store at " + root_.string() + ": " + ec.message());
    detail::Db db(db_path());
    db.exec(detail::schema);
  }

  const fs::path& root() const { return root_; }
  fs::path archives_dir() const { return root_ / "archives"; }
  fs::path db_path() const { return root_ / "shops.sqlite"; }
  fs::path index_path() const { return root_ / "index" / "index.artifact"; }
  fs::path config_path() const { return root_ / "config.ini"; }

  Config config() const { return fs::exists(config_path()) ? Config::load(config_path()) : Config{}; }

  std::vector<fs::path> archive_files() const {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(archives_dir()))
      if (e.path().extension() == ".jsonl") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
  }

  std::vector<ingest::ArchiveRecord> archive_records() const {
    std::vector<ingest::ArchiveRecord> all;
    for (const auto& f : archive_files()) {
      auto part = ingest::read_jsonl_file(f.string());
      all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    return all;
  }

  /// Appends the records that are new. Posts, threads and tweets are
  /// identified by id; sections and users are re-recorded only when their
  /// content changed; snapshots go to the shop tables.
  IngestReport ingest(const std::vector<ingest::ArchiveRecord>& records, const std::string& label = "ingest") {
    IngestReport report;
    report.records_read = records.size();
    std::map<std::string, std::string> latest;  // key -> payload JSON
    for (const auto& r : archive_records()) latest[r.key()] = canonical_payload(r);

    std::vector<ingest::ArchiveRecord> fresh;
    for (const auto& r : records) {
      try {
        ingest::validate(r);
      } catch (const Error& e) {
        report.errors.push_back(r.key() + ": " + e.what());
        continue;
      }
      auto type = std::string(ingest::to_string(r.record_type));
      if (r.record_type == ingest::RecordType::listing_snapshot) {
        const auto& snap = std::get<ShopSnapshot>(r.payload);
        if (auto existing = find_snapshot(snap.shop_id, snap.captured_at)) {
          if (*existing == snap) {
            ++report.unchanged;
          } else {
            report.errors.push_back(std::string(to_string(ErrorCode::duplicate_snapshot)) + ": shop " +
                                    std::to_string(snap.shop_id) + " on " + format_date(snap.captured_at));
          }
          continue;
        }
        insert_snapshot(snap);
        ++report.written;
        ++report.written_by_type[type];
        continue;
      }
      auto key = r.key();
      auto payload = canonical_payload(r);
      auto it = latest.find(key);
      bool mutable_record =
          r.record_type == ingest::RecordType::section || r.record_type == ingest::RecordType::user;
      if (it != latest.end() && (!mutable_record || it->second == payload)) {
        if (r.record_type == ingest::RecordType::post || r.record_type == ingest::RecordType::tweet)
          ++report.skipped;
        else
          ++report.unchanged;
        continue;
      }
      latest[key] = payload;
      fresh.push_back(r);
      ++report.written;
      ++report.written_by_type[type];
    }
    if (!fresh.empty()) {
      std::ostringstream out;
      ingest::write_jsonl(out, fresh);
      char name[32];
      std::snprintf(name, sizeof name, "%06zu-", archive_files().size() + 1);
      write_atomic(archives_dir() / (name + sanitize(label) + ".jsonl"), out.str());
    }
    return report;
  }

  std::optional<ShopSnapshot> find_snapshot(int shop_id, Date captured_at) const {
    detail::Db db(db_path());
    auto st = db.prepare(
        "SELECT s.snapshot_id, h.domain FROM snapshots s JOIN shops h USING (shop_id) WHERE shop_id = ? AND captured_at = ?");
    st.bind(1, std::int64_t{shop_id}).bind(2, format_date(captured_at));
    if (!st.step()) return std::nullopt;
    ShopSnapshot s{shop_id, st.text(1), captured_at, load_listings(db, st.integer(0))};
    return s;
  }

  bool has_snapshot(int shop_id, Date captured_at) const { return find_snapshot(shop_id, captured_at).has_value(); }

  /// Inserts one snapshot with its listings in a single transaction.
  void insert_snapshot(const ShopSnapshot& snap) {
    detail::Db db(db_path());
    db.exec("BEGIN IMMEDIATE");
    try {
      auto dup = db.prepare("SELECT 1 FROM snapshots WHERE shop_id = ? AND captured_at = ?");
      dup.bind(1, std::int64_t{snap.shop_id}).bind(2, format_date(snap.captured_at));
      if (dup.step())
        throw Error(ErrorCode::duplicate_snapshot, "shop " + std::to_string(snap.shop_id) + " already has a snapshot for " +
                                                       format_date(snap.captured_at));
      auto shop = db.prepare(
          "INSERT INTO shops (shop_id, domain) VALUES (?, ?) ON CONFLICT(shop_id) DO UPDATE SET domain = excluded.domain");
      shop.bind(1, std::int64_t{snap.shop_id}).bind(2, snap.domain).step();
      auto s = db.prepare("INSERT INTO snapshots (shop_id, captured_at) VALUES (?, ?)");
      s.bind(1, std::int64_t{snap.shop_id}).bind(2, format_date(snap.captured_at)).step();
      auto id = db.last_rowid();
      auto l = db.prepare(
          "INSERT INTO listings (snapshot_id, position, name, price, currency, unit) VALUES (?, ?, ?, ?, ?, ?)");
      for (std::size_t i = 0; i < snap.listings.size(); ++i) {
        const auto& x = snap.listings[i];
        l.bind(1, id).bind(2, std::int64_t(i)).bind(3, x.name).bind(4, x.price).bind(5, x.currency).bind(6, x.unit);
        l.step();
        l.reset();
      }
      db.exec("COMMIT");
    } catch (...) {
      db.exec("ROLLBACK");
      throw;
    }
  }

  std::vector<ShopSnapshot> snapshots() const {
    detail::Db db(db_path());
    auto st = db.prepare(
        "SELECT s.snapshot_id, s.shop_id, h.domain, s.captured_at FROM snapshots s JOIN shops h USING (shop_id) "
        "ORDER BY s.shop_id, s.captured_at");
    std::vector<ShopSnapshot> out;
    while (st.step()) {
      ShopSnapshot s;
      s.shop_id = static_cast<int>(st.integer(1));
      s.domain = st.text(2);
      s.captured_at = *try_parse_date(st.text(3));
      s.listings = load_listings(db, st.integer(0));
      out.push_back(std::move(s));
    }
    return out;
  }

  Corpus load_corpus() const {
    auto cfg = config();
    auto records = archive_records();
    for (const auto& s : snapshots())
      records.push_back(ingest::ArchiveRecord{ingest::RecordType::listing_snapshot, std::string(shop_source), s, {}});
    return ingest::assemble_corpus(records, cfg.forums);
  }

  /// Rebuilds the index artifact from everything in the store.
  IndexReport build_index() const {
    auto corpus = load_corpus();
    auto index = TermIndex::build(corpus);
    if (index.document_count() == 0) throw Error(ErrorCode::empty_store, "store holds no documents to index");
    write_atomic(index_path(), artifact_header() + index.to_json().dump() + "\n");
    return IndexReport{index.document_count(), index.vocabulary_size(), index.sources().size(), index_path().string()};
  }

  TermIndex load_index() const {
    if (!fs::exists(index_path())) throw Error(ErrorCode::stale_index, "no index artifact; run the index command");
    auto text = read_file(index_path());
    auto nl = text.find('\n');
    if (nl == std::string::npos || text.substr(0, nl + 1) != artifact_header())
      throw Error(ErrorCode::stale_index, "index artifact header does not match this engine; rebuild the index");
    return TermIndex::from_json(json::parse(std::string_view(text).substr(nl + 1)));
  }

  static std::string artifact_header() {
    return std::string(index_magic) + " " + std::to_string(index_format_version) + " " + std::string(engine_version) +
           "\n";
  }

private:
  /// Payload as compared for idempotence; fields recomputed on assembly
  /// (section depth and children, user post counts) are left out.
  static std::string canonical_payload(const ingest::ArchiveRecord& r) {
    json p = json(r)["payload"];
    if (r.record_type == ingest::RecordType::section) {
      p.erase("children");
      p.erase("depth");
    } else if (r.record_type == ingest::RecordType::user) {
      p.erase("post_count");
    }
    return p.dump();
  }

  static std::vector<ShopListing> load_listings(detail::Db& db, std::int64_t snapshot_id) {
    auto st = db.prepare("SELECT name, price, currency, unit FROM listings WHERE snapshot_id = ? ORDER BY position");
    st.bind(1, snapshot_id);
    std::vector<ShopListing> out;
    while (st.step()) out.push_back(ShopListing{st.text(0), st.opt_real(1), st.opt_text(2), st.opt_text(3)});
    return out;
  }

  static std::string sanitize(std::string s) {
    for (auto& c : s)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s.empty() ? "ingest" : s;
  }

  fs::path root_;
};

}  // namespace infoveil::service
