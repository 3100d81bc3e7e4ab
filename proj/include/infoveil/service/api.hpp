// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "infoveil/analytics.hpp"
#include "infoveil/heavytail/compare.hpp"
#include "infoveil/service/serialize.hpp"
#include "infoveil/service/store.hpp"
#include "infoveil/tokenizer.hpp"
#include "infoveil/wordlists.hpp"

namespace infoveil::service {

inline constexpr std::size_t page_cap = 1000;

/// Everything a query needs, loaded once and never modified.
struct Generation {
  Corpus corpus;
  TermIndex index;
  Config config;
  std::vector<SubstanceEntry> lexicon;
  Gazetteer gazetteer;
};

inline std::shared_ptr<const Generation> load_generation(const Store& store) {
  auto g = std::make_shared<Generation>();
  g->config = store.config();
  g->corpus = store.load_corpus();
  g->index = store.load_index();
  g->lexicon = g->config.lexicon();
  g->gazetteer = Gazetteer::builtin();
  if (g->config.gazetteer_path) {
    std::ifstream in(*g->config.gazetteer_path);
    if (!in) throw Error(ErrorCode::io_failure, "cannot read gazetteer " + g->config.gazetteer_path->string());
    g->gazetteer.load(in);
  }
  return g;
}

struct Response {
  int status = 200;
  json body;
};

using Params = std::multimap<std::string, std::string>;

/// HTTP status for an engine error.
inline int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::validation: return 400;
    case ErrorCode::unknown_forum:
    case ErrorCode::unknown_section:
    case ErrorCode::never_seen: return 404;
    case ErrorCode::degenerate_sample:
    case ErrorCode::too_few_tail_points: return 422;
    default: return 500;
  }
}

inline Response error_response(int status, std::string code, std::string message) {
  return Response{status, json{{"error", {{"status", status}, {"code", std::move(code)}, {"message", std::move(message)}}}}};
}

namespace detail {

/// Query parameters checked against an endpoint's accepted names.
class Query {
public:
  Query(const Params& params, std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, v] : params) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        throw Error(ErrorCode::validation, "unknown parameter '" + k + "'");
      if (!values_.emplace(k, v).second) throw Error(ErrorCode::validation, "parameter '" + k + "' given twice");
    }
  }

  std::optional<std::string> get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::string require(const std::string& key) const {
    auto v = get(key);
    if (!v || v->empty()) throw Error(ErrorCode::validation, "missing parameter '" + key + "'");
    return *v;
  }

  std::size_t count(const std::string& key, std::size_t fallback, std::size_t lo, std::size_t hi) const {
    auto v = get(key);
    if (!v) return fallback;
    std::size_t out = 0;
    auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || end != v->data() + v->size() || out < lo || out > hi)
      throw Error(ErrorCode::validation,
                  "parameter '" + key + "' must be an integer in " + std::to_string(lo) + ".." + std::to_string(hi));
    return out;
  }

  std::string term() const {
    auto raw = require("term");
    auto t = normalize_term(raw);
    if (t.empty()) throw Error(ErrorCode::validation, "term '" + raw + "' is not a single searchable token");
    return t;
  }

  Granularity bucket() const {
    auto v = get("bucket");
    if (!v) return Granularity::month;
    auto g = parse_granularity(*v);
    if (!g) throw Error(ErrorCode::validation, "bucket must be day, week or month");
    return *g;
  }

private:
  std::map<std::string, std::string> values_;
};

}  // namespace detail

/// The read-only JSON API. `handle` needs no sockets; the HTTP server and the
/// CLI both call it. Generations are swapped atomically by `reload`.
class Api {
public:
  explicit Api(std::shared_ptr<const Generation> generation) : generation_(std::move(generation)) {}

  std::shared_ptr<const Generation> current() const {
    std::lock_guard lock(mutex_);
    return generation_;
  }

  void swap(std::shared_ptr<const Generation> next) {
    std::lock_guard lock(mutex_);
    generation_ = std::move(next);
  }

  Response handle(std::string_view path, const Params& params = {}) const {
    auto g = current();
    try {
      return Response{200, route(*g, path, params)};
    } catch (const Error& e) {
      int status = status_for(e.code());
      if (status == 500) return error_response(500, "Internal", "internal error");
      return error_response(status, std::string(to_string(e.code())), e.what());
    } catch (const NotFound& e) {
      return error_response(404, "NotFound", e.what);
    } catch (const std::exception&) {
      return error_response(500, "Internal", "internal error");
    }
  }

private:
  struct NotFound {
    std::string what;
  };

  static json route(const Generation& g, std::string_view path, const Params& params) {
    constexpr std::string_view prefix = "/api/v1/";
    if (!path.starts_with(prefix)) throw NotFound{"no such endpoint"};
    auto rest = path.substr(prefix.size());
    if (rest == "sources") return sources(g, detail::Query(params, {}));
    if (rest == "trend") return trend(g, detail::Query(params, {"term", "source", "section", "bucket"}));
    if (rest == "horizon") return horizon(g, detail::Query(params, {"term", "forum", "depth", "bucket"}));
    if (rest == "cooccur") return cooccur(g, detail::Query(params, {"term", "source", "top", "offset"}));
    if (rest == "neologisms")
      return neologisms(g, detail::Query(params, {"source", "after", "min_count", "top", "offset"}));
    if (rest == "geo") return geo(g, detail::Query(params, {"forum"}));
    if (rest == "distfit") return distfit(g, detail::Query(params, {"forum", "metric"}));
    if (rest == "substances") return substances(g, detail::Query(params, {}));
    if (rest == "links/overlap") return links(g, detail::Query(params, {}));
    if (rest.starts_with("forums/") && rest.ends_with("/treemap")) {
      auto forum = rest.substr(7, rest.size() - 7 - 8);
      if (!forum.empty() && forum.find('/') == std::string_view::npos) {
        detail::Query(params, {});
        return json(analytics::treemap(g.corpus, forum));
      }
    }
    throw NotFound{"no such endpoint"};
  }

  static json sources(const Generation& g, const detail::Query&) {
    json list = json::array();
    for (const auto& src : g.index.sources()) {
      json s{{"id", src}};
      if (auto f = g.corpus.find_forum(src)) {
        s["kind"] = to_string(f->kind);
        s["name"] = f->name;
      } else {
        s["kind"] = to_string(src == microblog_source ? SourceKind::microblog : SourceKind::shop);
        s["name"] = src;
      }
      auto id = *g.index.source_id(src);
      auto [lo, hi] = g.index.source_range(id);
      s["documents"] = hi - lo;
      if (auto span = g.index.span(id)) {
        s["first"] = format_timestamp(span->first);
        s["last"] = format_timestamp(span->second);
      }
      list.push_back(std::move(s));
    }
    return json{{"sources", std::move(list)}};
  }

  static Scope scope_of(const detail::Query& q) {
    Scope scope{q.get("source"), q.get("section")};
    if (scope.section && !scope.source) throw Error(ErrorCode::validation, "section requires source");
    return scope;
  }

  static json trend(const Generation& g, const detail::Query& q) {
    return json(analytics::trend(g.index, q.term(), scope_of(q), q.bucket()));
  }

  static json horizon(const Generation& g, const detail::Query& q) {
    auto depth = static_cast<int>(q.count("depth", 1, 1, 64));
    return json(analytics::horizon(g.index, g.corpus, q.term(), q.require("forum"), depth, q.bucket()));
  }

  static json cooccur(const Generation& g, const detail::Query& q) {
    Scope scope = scope_of(q);
    auto top = q.count("top", 20, 1, page_cap);
    auto offset = q.count("offset", 0, 0, std::numeric_limits<std::uint32_t>::max());
    auto term = q.term();
    json items = json::array();
    for (const auto& [t, w] : g.index.cooccurrence(term, scope, top, wordlists::stopwords(), offset))
      items.push_back(json{{"term", t}, {"weight", w}});
    return json{{"term", term}, {"scope", scope}, {"offset", offset}, {"items", std::move(items)}};
  }

  static json neologisms(const Generation& g, const detail::Query& q) {
    analytics::NeologismQuery nq;
    nq.source = q.require("source");
    auto after = q.require("after");
    auto cutoff = try_parse_date(after);
    if (!cutoff) throw Error(ErrorCode::validation, "after must be a YYYY-MM-DD date");
    nq.cutoff = *cutoff;
    nq.min_count = q.count("min_count", 20, 1, std::numeric_limits<std::uint32_t>::max());
    nq.top_n = q.count("top", 100, 1, page_cap);
    nq.offset = q.count("offset", 0, 0, std::numeric_limits<std::uint32_t>::max());
    auto items = analytics::neologisms(g.index, nq, wordlists::stopwords(), wordlists::background_dictionary());
    return json{{"source", nq.source},   {"after", format_date(nq.cutoff)}, {"min_count", nq.min_count},
                {"offset", nq.offset}, {"items", items}};
  }

  static json geo(const Generation& g, const detail::Query& q) {
    auto forum = q.require("forum");
    return json{{"forum", forum}, {"countries", analytics::geo_distribution(g.corpus, forum, g.gazetteer)}};
  }

  static json distfit(const Generation& g, const detail::Query& q) {
    auto forum = q.require("forum");
    auto metric_name = q.get("metric").value_or("posts_per_user");
    auto metric = analytics::parse_activity_metric(metric_name);
    if (!metric) throw Error(ErrorCode::validation, "metric must be posts_per_user or posts_per_thread");
    auto values = analytics::activity_histogram(g.corpus, forum, *metric);
    heavytail::Sample sample(values);
    json out = json(heavytail::model_ordering(sample));
    out["forum"] = forum;
    out["metric"] = metric_name;
    out["n"] = sample.n();
    return out;
  }

  static json substances(const Generation& g, const detail::Query&) {
    return json{{"rows", analytics::substance_summary(g.corpus, g.index, g.lexicon, g.config.priority)}};
  }

  static json links(const Generation& g, const detail::Query&) {
    return json(analytics::link_overlap(g.corpus, g.config.shop_domains()));
  }

  mutable std::mutex mutex_;
  std::shared_ptr<const Generation> generation_;
};

}  // namespace infoveil::service
