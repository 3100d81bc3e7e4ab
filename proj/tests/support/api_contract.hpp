// SPDX-License-Identifier: Apache-2.0
#pragma once

// Endpoint-by-endpoint comparison of API responses with direct module calls
// on the same generation, plus the error statuses for malformed requests.
// Responses go through a dump/parse cycle so the check covers the wire text.

#include <string>
#include <vector>

#include "infoveil/service/api.hpp"

namespace contract {

using namespace infoveil;
using service::Api;
using service::Params;

struct Report {
  std::size_t checks = 0;
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
  bool ok() const { return failures.empty(); }
};

inline json wire(const service::Response& r) { return json::parse(r.body.dump()); }

template <class T>
bool round_trips(const Api& api, std::string_view path, const Params& params, const T& direct) {
  auto r = api.handle(path, params);
  if (r.status != 200) return false;
  return wire(r).get<T>() == direct;
}

/// Both forums, the fixture burst term and the seeded neologism query.
inline void check_round_trips(const Api& api, Report& rep, const std::string& neo_source, Date neo_cutoff) {
  const auto& g = *api.current();
  std::vector<std::string> forums;
  for (const auto& f : g.corpus.forums) forums.push_back(f.id);

  {
    auto r = api.handle("/api/v1/sources");
    std::vector<std::string> ids;
    std::size_t docs = 0;
    auto body = wire(r);
    for (const auto& s : body.at("sources")) {
      ids.push_back(s.at("id").get<std::string>());
      docs += s.at("documents").get<std::size_t>();
    }
    rep.expect(r.status == 200 && ids == g.index.sources() && docs == g.index.document_count(), "sources");
  }

  for (const auto& f : forums) {
    rep.expect(round_trips(api, "/api/v1/forums/" + f + "/treemap", {}, analytics::treemap(g.corpus, f)),
               "treemap " + f);
    rep.expect(round_trips(api, "/api/v1/geo", {{"forum", f}},
                           json{{"forum", f}, {"countries", analytics::geo_distribution(g.corpus, f, g.gazetteer)}}),
               "geo " + f);
    for (const char* metric : {"posts_per_user", "posts_per_thread"}) {
      auto r = api.handle("/api/v1/distfit", {{"forum", f}, {"metric", metric}});
      heavytail::Sample s(analytics::activity_histogram(g.corpus, f, *analytics::parse_activity_metric(metric)));
      auto j = wire(r);
      rep.expect(r.status == 200 && j.get<heavytail::ModelOrdering>() == heavytail::model_ordering(s) &&
                     j.at("fits").size() == 4 && j.at("comparisons").size() == 6 && j.at("n") == s.n(),
                 std::string("distfit ") + f + " " + metric);
    }
  }

  for (const char* term : {"mephedrone", "pentedrone", "mdai", "etizolam"}) {
    for (const char* bucket : {"day", "week", "month"}) {
      rep.expect(round_trips(api, "/api/v1/trend", {{"term", term}, {"bucket", bucket}},
                             analytics::trend(g.index, term, {}, *parse_granularity(bucket))),
                 std::string("trend ") + term + " " + bucket);
      for (const auto& f : forums) {
        rep.expect(round_trips(api, "/api/v1/trend", {{"term", term}, {"source", f}, {"bucket", bucket}},
                               analytics::trend(g.index, term, Scope{f, std::nullopt}, *parse_granularity(bucket))),
                   std::string("trend ") + term + " " + f + " " + bucket);
        const auto& sec = g.corpus.forum(f).sections.back().id;
        rep.expect(round_trips(api, "/api/v1/trend", {{"term", term}, {"source", f}, {"section", sec}, {"bucket", bucket}},
                               analytics::trend(g.index, term, Scope{f, sec}, *parse_granularity(bucket))),
                   std::string("trend ") + term + " " + sec + " " + bucket);
      }
    }
    for (const auto& f : forums)
      for (int depth : {1, 2})
        rep.expect(round_trips(api, "/api/v1/horizon", {{"term", term}, {"forum", f}, {"depth", std::to_string(depth)}},
                               analytics::horizon(g.index, g.corpus, term, f, depth, Granularity::month)),
                   std::string("horizon ") + term + " " + f);
    for (const std::optional<std::string>& src : std::vector<std::optional<std::string>>{std::nullopt, forums[0]}) {
      Params p{{"term", term}, {"top", "15"}, {"offset", "2"}};
      if (src) p.emplace("source", *src);
      auto r = api.handle("/api/v1/cooccur", p);
      std::vector<std::pair<std::string, std::size_t>> got;
      auto body = wire(r);
      for (const auto& it : body.at("items"))
        got.emplace_back(it.at("term").get<std::string>(), it.at("weight").get<std::size_t>());
      rep.expect(r.status == 200 &&
                     got == g.index.cooccurrence(term, Scope{src, std::nullopt}, 15, wordlists::stopwords(), 2),
                 std::string("cooccur ") + term);
    }
  }

  {
    analytics::NeologismQuery q;
    q.source = neo_source;
    q.cutoff = neo_cutoff;
    auto direct = analytics::neologisms(g.index, q, wordlists::stopwords(), wordlists::background_dictionary());
    auto r = api.handle("/api/v1/neologisms", {{"source", neo_source}, {"after", format_date(neo_cutoff)}});
    rep.expect(r.status == 200 && wire(r).at("items").get<std::vector<analytics::Neologism>>() == direct,
               "neologisms");
    q.top_n = 5;
    q.offset = 3;
    direct = analytics::neologisms(g.index, q, wordlists::stopwords(), wordlists::background_dictionary());
    r = api.handle("/api/v1/neologisms",
                   {{"source", neo_source}, {"after", format_date(neo_cutoff)}, {"top", "5"}, {"offset", "3"}});
    rep.expect(r.status == 200 && wire(r).at("items").get<std::vector<analytics::Neologism>>() == direct,
               "neologisms page");
  }

  {
    auto r = api.handle("/api/v1/substances");
    rep.expect(r.status == 200 && wire(r).at("rows").get<std::vector<analytics::SubstanceSummaryRow>>() ==
                                      analytics::substance_summary(g.corpus, g.index, g.lexicon, g.config.priority),
               "substances");
  }
  rep.expect(round_trips(api, "/api/v1/links/overlap", {}, analytics::link_overlap(g.corpus, g.config.shop_domains())),
             "links/overlap");
}

inline void check_status(const Api& api, Report& rep, std::string_view path, const Params& params, int status,
                         const std::string& what) {
  auto r = api.handle(path, params);
  bool shaped = r.body.contains("error") && r.body["error"].value("status", 0) == status &&
                r.body["error"].contains("code") && r.body["error"].contains("message");
  rep.expect(r.status == status && shaped, what + " -> " + std::to_string(status) + " (got " + std::to_string(r.status) + ")");
}

inline void check_errors(const Api& api, Report& rep, const std::string& forum) {
  // 400: malformed or unknown parameters.
  check_status(api, rep, "/api/v1/trend", {{"term", "mdai"}, {"colour", "red"}}, 400, "unknown parameter");
  check_status(api, rep, "/api/v1/trend", {}, 400, "missing term");
  check_status(api, rep, "/api/v1/trend", {{"term", "two words"}}, 400, "multi-token term");
  check_status(api, rep, "/api/v1/trend", {{"term", "mdai"}, {"bucket", "year"}}, 400, "bad bucket");
  check_status(api, rep, "/api/v1/trend", {{"term", "mdai"}, {"term", "mdpv"}}, 400, "repeated parameter");
  check_status(api, rep, "/api/v1/trend", {{"term", "mdai"}, {"section", "x"}}, 400, "section without source");
  check_status(api, rep, "/api/v1/horizon", {{"term", "mdai"}, {"forum", forum}, {"depth", "0"}}, 400, "depth 0");
  check_status(api, rep, "/api/v1/horizon", {{"term", "mdai"}}, 400, "horizon without forum");
  check_status(api, rep, "/api/v1/cooccur", {{"term", "mdai"}, {"top", "0"}}, 400, "top 0");
  check_status(api, rep, "/api/v1/cooccur", {{"term", "mdai"}, {"top", "1001"}}, 400, "top over cap");
  check_status(api, rep, "/api/v1/cooccur", {{"term", "mdai"}, {"top", "ten"}}, 400, "non-numeric top");
  check_status(api, rep, "/api/v1/cooccur", {{"term", "mdai"}, {"offset", "-1"}}, 400, "negative offset");
  check_status(api, rep, "/api/v1/neologisms", {{"source", forum}, {"after", "2012-13-01"}}, 400, "bad date");
  check_status(api, rep, "/api/v1/neologisms", {{"source", forum}}, 400, "missing cutoff");
  check_status(api, rep, "/api/v1/distfit", {{"forum", forum}, {"metric", "likes"}}, 400, "bad metric");
  check_status(api, rep, "/api/v1/sources", {{"x", "1"}}, 400, "parameter on sources");
  check_status(api, rep, "/api/v1/forums/" + forum + "/treemap", {{"depth", "1"}}, 400, "parameter on treemap");

  // 404: unknown forum, section or path.
  check_status(api, rep, "/api/v1/forums/nope/treemap", {}, 404, "treemap of unknown forum");
  check_status(api, rep, "/api/v1/geo", {{"forum", "nope"}}, 404, "geo of unknown forum");
  check_status(api, rep, "/api/v1/distfit", {{"forum", "nope"}}, 404, "distfit of unknown forum");
  check_status(api, rep, "/api/v1/horizon", {{"term", "mdai"}, {"forum", "nope"}}, 404, "horizon of unknown forum");
  check_status(api, rep, "/api/v1/trend", {{"term", "mdai"}, {"source", "nope"}}, 404, "trend of unknown source");
  check_status(api, rep, "/api/v1/trend", {{"term", "mdai"}, {"source", forum}, {"section", "nope"}}, 404,
               "unknown section");
  check_status(api, rep, "/api/v1/nothing", {}, 404, "unknown endpoint");
  check_status(api, rep, "/elsewhere", {}, 404, "outside the api");
}

}  // namespace contract
