// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "infoveil/corpus.hpp"
#include "infoveil/ingest/adapter.hpp"
#include "infoveil/ingest/assemble.hpp"
#include "infoveil/ingest/fetch.hpp"
#include "infoveil/ingest/stream.hpp"

namespace infoveil::service {

/// Monitored shops of the default deployment: ids and domains.
inline std::vector<ingest::ShopDescriptor> default_shops() {
  static const char* domains[] = {"chem-shop.co.uk",        "researchchemist.co.uk", "researchchemistry.co.uk",
                                  "sciencesuppliesdirect.com", "bitcoinhighs.co.uk", "buylegalrc.eu",
                                  "legalhighlabs.com",      "ukhighs.com",           "buyanychem.eu",
                                  "iceheadshop.co.uk"};
  std::vector<ingest::ShopDescriptor> out;
  for (int i = 0; i < 10; ++i)
    out.push_back({i + 1, domains[i], {"https://" + std::string(domains[i]) + "/"}, "generic-shop"});
  return out;
}

inline constexpr std::string_view default_lexicon_text = R"(# canonical: aliases
MDAI
MDPV
Methylone: bk-mdma
AB-CHMINACA
Methiopropamine: mpa
1P-LSD
Etizolam
Ethylphenidate
Synthacaine
Diphenidine
Mexedrone
)";

/// Lexicon file: one substance per line, "Canonical: alias, alias".
inline std::vector<SubstanceEntry> parse_lexicon(std::istream& in) {
  std::vector<SubstanceEntry> out;
  std::string line;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    std::string canonical = trim(line.substr(0, colon));
    std::vector<std::string> aliases;
    if (colon != std::string::npos) {
      std::stringstream rest(line.substr(colon + 1));
      std::string a;
      while (std::getline(rest, a, ','))
        if (auto t = trim(a); !t.empty()) aliases.push_back(t);
    }
    if (canonical.empty()) throw Error(ErrorCode::validation, "lexicon line without a substance name");
    out.emplace_back(canonical, aliases);
  }
  return out;
}

/// Operator configuration, read from `key = value` lines.
///
///   keywords = keywords.txt            stream keyword list (default: lexicon aliases)
///   lexicon = lexicon.txt              substance list (default: built-in)
///   gazetteer = places.txt             extra gazetteer lines
///   adapters = adapters/               extra adapter JSON files
///   priority = forum-bl, forum-df, twitter, shops
///   fetch.min_delay_ms / fetch.max_concurrent_hosts / fetch.max_retries /
///   fetch.backoff_base_ms / fetch.revisit_days
///   forum.<id> = <display name> | <source kind>
///   shop.<id> = <domain> | <adapter> | <showcase url> <showcase url> ...
///
/// Any forum.* or shop.* key replaces the corresponding default table.
/// Relative paths resolve against the config file's directory.
struct Config {
  std::vector<ingest::ShopDescriptor> shops = default_shops();
  std::map<std::string, ingest::ForumInfo> forums{
      {"forum-bl", {"Bluelight-like forum", SourceKind::forum_bluelight_like}},
      {"forum-df", {"Drugsforum-like forum", SourceKind::forum_drugsforum_like}}};
  std::vector<std::string> priority{"forum-bl", "forum-df", std::string(microblog_source), std::string(shop_source)};
  ingest::FetchPolicy fetch;
  std::optional<std::filesystem::path> keywords_path;
  std::optional<std::filesystem::path> lexicon_path;
  std::optional<std::filesystem::path> gazetteer_path;
  std::optional<std::filesystem::path> adapters_dir;

  std::vector<std::string> shop_domains() const {
    std::vector<std::string> out;
    for (const auto& s : shops) out.push_back(s.domain);
    return out;
  }

  std::vector<SubstanceEntry> lexicon() const {
    if (lexicon_path) {
      std::ifstream in(*lexicon_path);
      if (!in) throw Error(ErrorCode::io_failure, "cannot read lexicon " + lexicon_path->string());
      return parse_lexicon(in);
    }
    std::istringstream in{std::string(default_lexicon_text)};
    return parse_lexicon(in);
  }

  std::set<std::string> keywords() const {
    if (keywords_path) {
      std::ifstream in(*keywords_path);
      if (!in) throw Error(ErrorCode::io_failure, "cannot read keyword list " + keywords_path->string());
      return ingest::read_keywords(in);
    }
    std::set<std::string> out;
    for (const auto& e : lexicon()) out.insert(e.aliases().begin(), e.aliases().end());
    return out;
  }

  static Config parse(std::istream& in, const std::filesystem::path& base = {});

  static Config load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::io_failure, "cannot read config " + file.string());
    return parse(in, file.parent_path());
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, s.find_last_not_of(" \t\r") - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long v = std::stol(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::validation, "config key '" + key + "' needs an integer, got '" + value + "'");
}

}  // namespace detail

inline Config Config::parse(std::istream& in, const std::filesystem::path& base) {
  Config c;
  bool custom_shops = false, custom_forums = false;
  auto resolve = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() || base.empty() ? p : base / p;
  };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto text = detail::trim(line);
    if (text.empty() || text[0] == '#') continue;
    auto eq = text.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::validation, "config line " + std::to_string(lineno) + ": expected key = value");
    auto key = detail::trim(std::string_view(text).substr(0, eq));
    auto value = detail::trim(std::string_view(text).substr(eq + 1));
    if (key == "keywords") c.keywords_path = resolve(value);
    else if (key == "lexicon") c.lexicon_path = resolve(value);
    else if (key == "gazetteer") c.gazetteer_path = resolve(value);
    else if (key == "adapters") c.adapters_dir = resolve(value);
    else if (key == "priority") c.priority = detail::split(value, ',');
    else if (key == "fetch.min_delay_ms") c.fetch.min_delay_per_host = ingest::Millis(detail::parse_long(key, value));
    else if (key == "fetch.max_concurrent_hosts") c.fetch.max_concurrent_hosts = std::size_t(detail::parse_long(key, value));
    else if (key == "fetch.max_retries") c.fetch.max_retries = int(detail::parse_long(key, value));
    else if (key == "fetch.backoff_base_ms") c.fetch.backoff_base = ingest::Millis(detail::parse_long(key, value));
    else if (key == "fetch.revisit_days") c.fetch.revisit_interval = std::chrono::hours(24 * detail::parse_long(key, value));
    else if (key.starts_with("forum.")) {
      if (!custom_forums) c.forums.clear(), custom_forums = true;
      auto parts = detail::split(value, '|');
      ingest::ForumInfo info{parts[0], SourceKind::forum_bluelight_like};
      if (parts.size() > 1) {
        auto kind = parse_source_kind(parts[1]);
        if (!kind || !is_forum(*kind)) throw Error(ErrorCode::validation, "config key '" + key + "': bad forum kind");
        info.kind = *kind;
      }
      c.forums[key.substr(6)] = info;
    } else if (key.starts_with("shop.")) {
      if (!custom_shops) c.shops.clear(), custom_shops = true;
      auto parts = detail::split(value, '|');
      ingest::ShopDescriptor s;
      s.shop_id = int(detail::parse_long(key, key.substr(5)));
      s.domain = parts[0];
      if (parts.size() > 1 && !parts[1].empty()) s.adapter = parts[1];
      if (parts.size() > 2) {
        std::istringstream urls(parts[2]);
        for (std::string u; urls >> u;) s.showcase_urls.push_back(u);
      }
      if (s.showcase_urls.empty()) s.showcase_urls.push_back("https://" + s.domain + "/");
      c.shops.push_back(std::move(s));
    } else {
      throw Error(ErrorCode::validation, "unknown config key '" + key + "'");
    }
  }
  c.fetch.validate();
  std::sort(c.shops.begin(), c.shops.end(), [](const auto& a, const auto& b) { return a.shop_id < b.shop_id; });
  return c;
}

}  // namespace infoveil::service
