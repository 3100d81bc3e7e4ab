// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "infoveil/analytics.hpp"
#include "infoveil/heavytail/compare.hpp"
#include "infoveil/json_io.hpp"

// JSON forms of analytics and fitting results, as served by the API. Every
// to_json has a matching from_json so responses can be read back and compared
// with direct module calls.

namespace infoveil {

inline void to_json(json& j, const Scope& s) {
  j = json::object();
  detail::put_optional(j, "source", s.source);
  detail::put_optional(j, "section", s.section);
}
inline void from_json(const json& j, Scope& s) {
  s.source = detail::get_optional<std::string>(j, "source");
  s.section = detail::get_optional<std::string>(j, "section");
}

inline void to_json(json& j, const TimeBucket& b) {
  j = json{{"granularity", to_string(b.granularity)}, {"start", format_date(b.start)}, {"label", b.label()}};
}
inline void from_json(const json& j, TimeBucket& b) {
  auto g = parse_granularity(j.at("granularity").get<std::string>());
  auto d = try_parse_date(j.at("start").get<std::string>());
  if (!g || !d) throw Error(ErrorCode::validation, "bad time bucket");
  b = TimeBucket{*g, *d};
}

}  // namespace infoveil

namespace infoveil::analytics {

inline void to_json(json& j, const TrendPoint& p) {
  j = json{{"bucket", p.bucket}, {"docs_with_term", p.docs_with_term}, {"docs_total", p.docs_total},
           {"normalized", p.normalized}};
}
inline void from_json(const json& j, TrendPoint& p) {
  j.at("bucket").get_to(p.bucket);
  j.at("docs_with_term").get_to(p.docs_with_term);
  j.at("docs_total").get_to(p.docs_total);
  j.at("normalized").get_to(p.normalized);
}

inline void to_json(json& j, const TrendSeries& s) {
  j = json{{"term", s.term}, {"scope", s.scope}, {"granularity", to_string(s.granularity)}, {"points", s.points}};
}
inline void from_json(const json& j, TrendSeries& s) {
  j.at("term").get_to(s.term);
  j.at("scope").get_to(s.scope);
  s.granularity = parse_granularity(j.at("granularity").get<std::string>()).value();
  j.at("points").get_to(s.points);
}

inline void to_json(json& j, const HorizonRow& r) {
  j = json{{"section_id", r.section_id}, {"section_name", r.section_name}, {"series", r.series}};
}
inline void from_json(const json& j, HorizonRow& r) {
  j.at("section_id").get_to(r.section_id);
  j.at("section_name").get_to(r.section_name);
  j.at("series").get_to(r.series);
}

inline void to_json(json& j, const HorizonSet& h) {
  j = json{{"term", h.term}, {"forum", h.forum}, {"depth", h.depth}, {"granularity", to_string(h.granularity)},
           {"rows", h.rows}};
}
inline void from_json(const json& j, HorizonSet& h) {
  j.at("term").get_to(h.term);
  j.at("forum").get_to(h.forum);
  j.at("depth").get_to(h.depth);
  h.granularity = parse_granularity(j.at("granularity").get<std::string>()).value();
  j.at("rows").get_to(h.rows);
}

inline void to_json(json& j, const Neologism& n) {
  j = json{{"term", n.term}, {"total_count", n.total_count}, {"first_seen_at", format_timestamp(n.first_seen_at)}};
}
inline void from_json(const json& j, Neologism& n) {
  j.at("term").get_to(n.term);
  j.at("total_count").get_to(n.total_count);
  n.first_seen_at = infoveil::detail::get_ts(j, "first_seen_at");
}

inline void to_json(json& j, const FirstSeen& f) { j = json{{"source", f.source}, {"at", format_timestamp(f.at)}}; }
inline void from_json(const json& j, FirstSeen& f) {
  j.at("source").get_to(f.source);
  f.at = infoveil::detail::get_ts(j, "at");
}

inline void to_json(json& j, const TreemapNode& n) {
  j = json{{"id", n.id},
           {"name", n.name},
           {"own_posts", n.own_posts},
           {"subtree_posts", n.subtree_posts},
           {"children", n.children}};
}
inline void from_json(const json& j, TreemapNode& n) {
  j.at("id").get_to(n.id);
  j.at("name").get_to(n.name);
  j.at("own_posts").get_to(n.own_posts);
  j.at("subtree_posts").get_to(n.subtree_posts);
  j.at("children").get_to(n.children);
}

inline void to_json(json& j, const SubstanceSummaryRow& r) {
  j = json{{"substance", r.substance}, {"tweet_count", r.tweet_count}, {"post_count", r.post_count},
           {"shop_ids", r.shop_ids}};
  infoveil::detail::put_optional(j, "first_seen", r.first_seen);
}
inline void from_json(const json& j, SubstanceSummaryRow& r) {
  j.at("substance").get_to(r.substance);
  j.at("tweet_count").get_to(r.tweet_count);
  j.at("post_count").get_to(r.post_count);
  j.at("shop_ids").get_to(r.shop_ids);
  r.first_seen = infoveil::detail::get_optional<FirstSeen>(j, "first_seen");
}

inline void to_json(json& j, const LinkOverlapPair& p) {
  j = json{{"source_a", p.source_a},   {"source_b", p.source_b},   {"domains_a", p.domains_a},
           {"domains_b", p.domains_b}, {"intersection", p.intersection}};
}
inline void from_json(const json& j, LinkOverlapPair& p) {
  j.at("source_a").get_to(p.source_a);
  j.at("source_b").get_to(p.source_b);
  j.at("domains_a").get_to(p.domains_a);
  j.at("domains_b").get_to(p.domains_b);
  j.at("intersection").get_to(p.intersection);
}

inline void to_json(json& j, const LinkOverlapReport& r) { j = json{{"domains", r.domains}, {"pairs", r.pairs}}; }
inline void from_json(const json& j, LinkOverlapReport& r) {
  j.at("domains").get_to(r.domains);
  j.at("pairs").get_to(r.pairs);
}

}  // namespace infoveil::analytics

namespace infoveil::heavytail {

inline void to_json(json& j, const FitResult& f) {
  json params = json::object();
  switch (f.model) {
    case Model::power_law: params["alpha"] = f.params.alpha; break;
    case Model::lognormal: params["mu"] = f.params.mu, params["sigma"] = f.params.sigma; break;
    case Model::exponential: params["lambda"] = f.params.lambda; break;
    case Model::truncated_power_law: params["alpha"] = f.params.alpha, params["lambda"] = f.params.lambda; break;
  }
  j = json{{"model", to_string(f.model)},
           {"params", params},
           {"xmin", f.xmin},
           {"n_tail", f.n_tail},
           {"ks_distance", f.ks_distance},
           {"log_likelihood", f.log_likelihood},
           {"converged", f.converged},
           {"iterations", f.iterations}};
}
inline void from_json(const json& j, FitResult& f) {
  f.model = parse_model(j.at("model").get<std::string>());
  f.params = Params{};
  const auto& p = j.at("params");
  if (p.contains("alpha")) f.params.alpha = p["alpha"].get<double>();
  if (p.contains("lambda")) f.params.lambda = p["lambda"].get<double>();
  if (p.contains("mu")) f.params.mu = p["mu"].get<double>();
  if (p.contains("sigma")) f.params.sigma = p["sigma"].get<double>();
  j.at("xmin").get_to(f.xmin);
  j.at("n_tail").get_to(f.n_tail);
  j.at("ks_distance").get_to(f.ks_distance);
  j.at("log_likelihood").get_to(f.log_likelihood);
  j.at("converged").get_to(f.converged);
  j.at("iterations").get_to(f.iterations);
}

/// Field-wise equality where unused (NaN) parameters compare equal.
inline bool same_fit(const FitResult& a, const FitResult& b) {
  auto eq = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
  return a.model == b.model && eq(a.params.alpha, b.params.alpha) && eq(a.params.lambda, b.params.lambda) &&
         eq(a.params.mu, b.params.mu) && eq(a.params.sigma, b.params.sigma) && a.xmin == b.xmin &&
         a.n_tail == b.n_tail && a.ks_distance == b.ks_distance && a.log_likelihood == b.log_likelihood &&
         a.converged == b.converged && a.iterations == b.iterations;
}

inline void to_json(json& j, const Comparison& c) {
  j = json{{"model_a", to_string(c.model_a)},
           {"model_b", to_string(c.model_b)},
           {"R", c.R},
           {"normalized_ratio", c.normalized_ratio},
           {"p", c.p},
           {"identical", c.identical},
           {"n", c.n}};
}
inline void from_json(const json& j, Comparison& c) {
  c.model_a = parse_model(j.at("model_a").get<std::string>());
  c.model_b = parse_model(j.at("model_b").get<std::string>());
  j.at("R").get_to(c.R);
  j.at("normalized_ratio").get_to(c.normalized_ratio);
  j.at("p").get_to(c.p);
  j.at("identical").get_to(c.identical);
  j.at("n").get_to(c.n);
}

inline bool operator==(const Comparison& a, const Comparison& b) {
  return a.model_a == b.model_a && a.model_b == b.model_b && a.R == b.R && a.normalized_ratio == b.normalized_ratio &&
         a.p == b.p && a.identical == b.identical && a.n == b.n;
}

inline void to_json(json& j, const RankEntry& e) {
  j = json{{"model", to_string(e.model)},
           {"log_likelihood", e.log_likelihood},
           {"rank", e.rank},
           {"tied_with_previous", e.tied_with_previous}};
}
inline void from_json(const json& j, RankEntry& e) {
  e.model = parse_model(j.at("model").get<std::string>());
  j.at("log_likelihood").get_to(e.log_likelihood);
  j.at("rank").get_to(e.rank);
  j.at("tied_with_previous").get_to(e.tied_with_previous);
}

inline bool operator==(const RankEntry& a, const RankEntry& b) {
  return a.model == b.model && a.log_likelihood == b.log_likelihood && a.rank == b.rank &&
         a.tied_with_previous == b.tied_with_previous;
}

inline void to_json(json& j, const ModelOrdering& o) {
  j = json{{"fits", o.fits}, {"comparisons", o.comparisons}, {"ranking", o.ranking}};
}
inline void from_json(const json& j, ModelOrdering& o) {
  j.at("fits").get_to(o.fits);
  j.at("comparisons").get_to(o.comparisons);
  j.at("ranking").get_to(o.ranking);
}

inline bool operator==(const ModelOrdering& a, const ModelOrdering& b) {
  if (a.fits.size() != b.fits.size()) return false;
  for (std::size_t i = 0; i < a.fits.size(); ++i)
    if (!same_fit(a.fits[i], b.fits[i])) return false;
  return a.comparisons == b.comparisons && a.ranking == b.ranking;
}

}  // namespace infoveil::heavytail
