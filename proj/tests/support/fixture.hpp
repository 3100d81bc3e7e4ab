// SPDX-License-Identifier: Apache-2.0
#pragma once

// Deterministic two-forum corpus with known ground truth: seeded neologisms,
// a mephedrone burst, a section-local term, substance sightings with fixed
// dates, and user locations whose countries are recorded at generation.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "infoveil/corpus.hpp"
#include "infoveil/service/config.hpp"
#include "infoveil/wordlists.hpp"

namespace fixture {

using namespace infoveil;

inline Date day(int y, int m, int d) {
  return Date{std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}}};
}

inline Timestamp at(int y, int m, int d, int hh = 0, int mm = 0) {
  return Timestamp{day(y, m, d)} + std::chrono::hours{hh} + std::chrono::minutes{mm};
}

inline constexpr const char* bl = "forum-bl";
inline constexpr const char* df = "forum-df";

struct Seeds {
  std::string neologism_source = df;
  Date cutoff = day(2012, 1, 1);
  std::size_t min_count = 20;
  std::map<std::string, std::size_t> qualifying;  // term -> documents in forum-df
  std::vector<std::string> early;                 // one occurrence at or before the cutoff
  std::vector<std::string> rare;                  // fewer than min_count documents

  std::string burst_term = "mephedrone";
  Date burst_month = day(2010, 3, 1);
  std::string section_term = "pentedrone";
  std::string section_only = "df-bk";

  // Synthacaine is seeded in forum-df before forum-bl; Diphenidine appears
  // in forum-bl and on twitter at the same instant.
  Timestamp synthacaine_df = at(2012, 1, 5, 10, 0);
  Timestamp synthacaine_bl = at(2012, 2, 1, 9, 30);
  Timestamp diphenidine_tie = at(2013, 2, 2, 2, 2);

  // Ground truth for Mexedrone: tweets, forum-bl posts, forum-df posts, shops.
  std::size_t mexedrone_tweets = 3, mexedrone_bl = 5, mexedrone_df = 2;
  std::set<int> mexedrone_shops{1, 10};

  std::map<std::string, std::map<std::string, std::size_t>> countries;  // forum -> code -> users
};

struct Fixture {
  Corpus corpus;
  Seeds seeds;
  std::vector<Date> capture_days;
  Timestamp captured_at = at(2014, 1, 10);
};

namespace detail {

struct SectionSpec {
  const char* id;
  const char* name;
  const char* parent;
};

inline const std::vector<SectionSpec>& bl_sections() {
  static const std::vector<SectionSpec> s{
      {"bl-root", "Bluelight-like", nullptr},       {"bl-dd", "Drug Discussion", "bl-root"},
      {"bl-rc", "Research Chemicals", "bl-dd"},     {"bl-rc-new", "New & Emerging", "bl-rc"},
      {"bl-op", "Opioids", "bl-dd"},                {"bl-hr", "Harm Reduction", "bl-root"},
      {"bl-dt", "Drug Testing", "bl-hr"},           {"bl-tr", "Trip Reports", "bl-hr"},
      {"bl-com", "Community", "bl-root"},           {"bl-soc", "Social Lounge", "bl-com"}};
  return s;
}

inline const std::vector<SectionSpec>& df_sections() {
  static const std::vector<SectionSpec> s{
      {"df-root", "Drugsforum-like", nullptr},        {"df-info", "Drug Information", "df-root"},
      {"df-stim", "Stimulants", "df-info"},           {"df-bk", "Beta-Ketones", "df-stim"},
      {"df-amph", "Amphetamines", "df-stim"},         {"df-psy", "Psychedelics", "df-info"},
      {"df-hr", "Harm Reduction", "df-root"},         {"df-safe", "Safer Use", "df-hr"},
      {"df-cult", "Drug Culture & Society", "df-root"}};
  return s;
}

struct Place {
  const char* text;  // nullptr: no location given
  const char* code;
  int weight;
};

inline const std::vector<Place>& places() {
  static const std::vector<Place> p{
      {"London, UK", "GB", 12},          {"Manchester", "GB", 6},           {"Glasgow, Scotland", "GB", 3},
      {"Sydney, Australia", "AU", 5},    {"Melbourne", "AU", 3},            {"Toronto, Canada", "CA", 4},
      {"Berlin", "DE", 4},               {"Amsterdam, the Netherlands", "NL", 3},
      {"Paris, France", "FR", 2},        {"Dublin", "IE", 2},               {"New York, USA", "US", 6},
      {"Texas", "US", 3},                {"Stockholm, Sweden", "SE", 2},    {"Georgia", "GE", 1},
      {"somewhere over the rainbow", "UNKNOWN", 3},                         {"the internet", "UNKNOWN", 2},
      {nullptr, "UNKNOWN", 6}};
  return p;
}

inline const std::vector<std::string>& forum_links(const std::string& forum) {
  static const std::vector<std::string> b{"https://www.bbc.co.uk/news/health", "http://erowid.org/chemicals/mdai/",
                                          "https://www.theguardian.com/society/drugs",
                                          "https://www.reddit.com/r/researchchemicals"};
  static const std::vector<std::string> d{"https://www.bbc.co.uk/news/health", "http://erowid.org/chemicals/mdai/",
                                          "https://tripsit.me/factsheets?id=4",
                                          "https://en.wikipedia.org/wiki/Novel_psychoactive_substance"};
  return forum == bl ? b : d;
}

inline const std::vector<std::string>& tweet_links() {
  static const std::vector<std::string> t{"https://www.iceheadshop.co.uk/x", "http://bit.ly/2abcD",
                                          "https://www.bbc.co.uk/news/health", "https://buylegalrc.eu/shop"};
  return t;
}

// Lexicon surface forms scattered at random; the seeded substances are
// placed explicitly instead.
inline const std::vector<std::string>& random_aliases() {
  static const std::vector<std::string> a{"MDAI", "mdai",       "MDPV",     "Methylone",      "bk-MDMA",
                                          "AB-CHMINACA",        "MPA",      "Methiopropamine", "1P-LSD",
                                          "Etizolam",           "Ethylphenidate"};
  return a;
}

class Builder {
public:
  explicit Builder(std::uint64_t seed) : rng_(seed) {
    for (const auto& w : wordlists::common_words()) filler_.push_back(w);
  }

  Fixture build() {
    Fixture fx;
    fx.capture_days = {day(2013, 6, 3), day(2013, 6, 10), day(2013, 6, 17)};
    seeds_ = &fx.seeds;
    seed_terms();

    fx.corpus.forums.push_back(make_forum(bl, "Bluelight-like forum", SourceKind::forum_bluelight_like,
                                          bl_sections(), 420, 5998, 300, "bl"));
    fx.corpus.forums.push_back(make_forum(df, "Drugsforum-like forum", SourceKind::forum_drugsforum_like,
                                          df_sections(), 280, 3998, 200, "df"));
    auto& fbl = fx.corpus.forums[0];
    auto& fdf = fx.corpus.forums[1];
    fx.corpus.tweets = make_tweets(1500);
    place_seeds(fbl, fdf, fx.corpus.tweets);
    for (auto& t : fx.corpus.tweets) t.matched_keywords = matched(t.text);
    fx.corpus.snapshots = make_snapshots(fx.capture_days);
    fx.corpus.finalize();
    return fx;
  }

private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::string words(int lo, int hi) {
    int n = std::uniform_int_distribution<int>(lo, hi)(rng_);
    std::string out;
    for (int i = 0; i < n; ++i) {
      if (i) out += ' ';
      out += filler_[pick(filler_.size())];
    }
    return out;
  }

  Timestamp uniform_time(Timestamp from, Timestamp to) {
    auto span = std::chrono::duration_cast<std::chrono::minutes>(to - from).count();
    return from + std::chrono::minutes{std::uniform_int_distribution<long>(0, span)(rng_)};
  }

  void seed_terms() {
    const char* qualifying[] = {"diclazepam",  "flubromazolam", "deschloroketamine", "isopropylphenidate",
                                "methoxphenidine", "clonazolam", "flualprazolam",   "metizolam",
                                "nifoxipam",   "pyrazolam",     "bromazolam",        "fluorolintane",
                                "ephenidine",  "hexedrone",     "dipentylone"};
    std::size_t counts[] = {25, 20, 38, 21, 33, 22, 30, 27, 24, 36, 29, 20, 31, 26, 23};
    for (std::size_t i = 0; i < 15; ++i) seeds_->qualifying[qualifying[i]] = counts[i];
    seeds_->early = {"phenazepam", "meclonazepam", "adrafinil", "bromantane",
                     "phenibut",   "noopept",      "tianeptine", "kratom"};
    seeds_->rare = {"etomidate", "lisdexamfetamine", "mitragynine", "carisoprodol",
                    "zopiclone", "gabapentinoid",    "benzofury"};
  }

  Forum make_forum(const std::string& id, const std::string& name, SourceKind kind,
                   const std::vector<SectionSpec>& specs, std::size_t n_threads, std::size_t n_posts,
                   std::size_t n_users, const std::string& prefix) {
    Forum f;
    f.id = id;
    f.name = name;
    f.kind = kind;
    for (const auto& s : specs) {
      SectionNode node{s.id, s.name, s.parent ? std::optional<std::string>(s.parent) : std::nullopt, 0, {}};
      f.sections.push_back(node);
    }
    for (auto& s : f.sections)
      for (const auto& c : f.sections)
        if (c.parent_id == s.id) s.children.push_back(c.id);

    // Users and where they say they live.
    std::vector<int> place_weights;
    for (const auto& p : places()) place_weights.push_back(p.weight);
    std::discrete_distribution<std::size_t> place_dist(place_weights.begin(), place_weights.end());
    for (std::size_t u = 0; u < n_users; ++u) {
      UserProfile up;
      up.id = prefix + "-u" + std::to_string(1000 + u);
      up.forum_id = id;
      up.handle = (u % 37 == 5 ? "Zo\xC3\xAB_" : "user_") + std::to_string(u);
      const auto& place = places()[place_dist(rng_)];
      if (place.text) up.location_raw = place.text;
      ++seeds_->countries[id][place.code];
      f.users.push_back(up);
    }

    // Threads: one welcome thread at the start of the corpus holding every
    // link the forum uses, then the generated ones.
    const Timestamp t0 = at(2008, 1, 1), t1 = at(2013, 11, 30);
    Thread welcome{prefix + "-t0", id, specs.front().id, "Welcome & rules", t0};
    f.threads.push_back(welcome);
    std::string intro = "welcome";
    for (const auto& l : forum_links(id)) intro += " " + l;
    f.posts.push_back(Post{prefix + "-p0", welcome.id, f.users[0].id, t0, intro});

    std::vector<double> weight;
    for (std::size_t t = 1; t <= n_threads; ++t) {
      Thread th;
      th.id = prefix + "-t" + std::to_string(t);
      th.forum_id = id;
      th.section_id = specs[pick(specs.size())].id;
      th.title = "About " + words(2, 4);
      th.created_at = uniform_time(t0, t1);
      f.threads.push_back(th);
      double u = std::uniform_real_distribution<double>(0.02, 1.0)(rng_);
      weight.push_back(std::pow(u, -1.3));
    }
    std::vector<std::size_t> sizes(n_threads, 1);
    std::discrete_distribution<std::size_t> thread_dist(weight.begin(), weight.end());
    for (std::size_t i = n_threads; i < n_posts - 1; ++i) ++sizes[thread_dist(rng_)];

    std::vector<double> user_weight;
    for (std::size_t u = 0; u < n_users; ++u) user_weight.push_back(1.0 / std::pow(static_cast<double>(u + 1), 1.1));
    std::discrete_distribution<std::size_t> author_dist(user_weight.begin(), user_weight.end());

    std::size_t next = 1;
    for (std::size_t t = 0; t < n_threads; ++t) {
      auto& th = f.threads[t + 1];
      Timestamp first = th.created_at;
      for (std::size_t k = 0; k < sizes[t]; ++k) {
        Post p;
        p.id = prefix + "-p" + std::to_string(next++);
        p.thread_id = th.id;
        p.author_id = f.users[author_dist(rng_)].id;
        p.created_at = k == 0 ? first : uniform_time(first, first + std::chrono::hours{24 * 45});
        p.text = post_text(id, th.section_id, p.created_at);
        f.posts.push_back(std::move(p));
      }
    }
    return f;
  }

  std::string post_text(const std::string& forum, const std::string& section, Timestamp ts) {
    std::string text = words(5, 15);
    auto add = [&](const std::string& w) {
      // Insert at a random word boundary so seeded words are not always last.
      std::vector<std::size_t> gaps{0};
      for (std::size_t i = 0; i < text.size(); ++i)
        if (text[i] == ' ') gaps.push_back(i + 1);
      gaps.push_back(text.size() + 1);
      auto g = gaps[pick(gaps.size())];
      if (g > text.size()) text += " " + w;
      else text.insert(g, w + " ");
    };
    if (chance(0.12)) add(random_aliases()[pick(random_aliases().size())]);
    if (chance(0.01)) add("\xCE\xB1-PVP");
    double meph = 0.03;
    if (forum == df && ts >= Timestamp{day(2010, 3, 1)} && ts < Timestamp{day(2010, 4, 1)}) meph = 0.6;
    if (chance(meph)) add(chance(0.5) ? "mephedrone" : "Mephedrone");
    if (chance(0.05)) add("plant-food");
    if (section == seeds_->section_only && chance(0.3)) add("pentedrone");
    if (chance(0.05)) text += " " + forum_links(forum)[pick(forum_links(forum).size())];
    return text;
  }

  std::vector<Tweet> make_tweets(std::size_t n) {
    std::vector<Tweet> out;
    for (std::size_t i = 0; i < n; ++i) {
      Tweet t;
      t.id = "tw-" + std::to_string(100000 + i);
      t.created_at = uniform_time(at(2009, 1, 1), at(2013, 12, 31));
      t.author_handle = "tweeter_" + std::to_string(pick(400));
      t.text = words(3, 10) + " " + random_aliases()[pick(random_aliases().size())];
      if (chance(0.2)) t.text += " " + random_aliases()[pick(random_aliases().size())];
      if (chance(0.1)) t.text += " " + tweet_links()[pick(tweet_links().size())];
      out.push_back(std::move(t));
    }
    return out;
  }

  // Distinct posts of `f` within (from, to], in random order.
  std::vector<Post*> posts_between(Forum& f, Timestamp from, Timestamp to) {
    std::vector<Post*> out;
    for (auto& p : f.posts)
      if (p.created_at > from && p.created_at <= to && p.id.find("-p0") == std::string::npos) out.push_back(&p);
    std::shuffle(out.begin(), out.end(), rng_);
    return out;
  }

  static void append(std::string& text, const std::string& w) { text += " " + w; }

  Post& seed_thread(Forum& f, const std::string& tid, const std::string& section, Timestamp ts,
                    const std::string& text) {
    f.threads.push_back(Thread{tid, f.id, section, "Seed " + tid, ts});
    f.posts.push_back(Post{tid + "-p", tid, f.users[1].id, ts, text});
    return f.posts.back();
  }

  void place_seeds(Forum& fbl, Forum& fdf, std::vector<Tweet>& tweets) {
    const Timestamp cutoff{seeds_->cutoff};
    const Timestamp end = at(2014, 1, 1);

    // Neologisms in forum-df.
    for (const auto& [term, count] : seeds_->qualifying) {
      auto pool = posts_between(fdf, cutoff, end);
      for (std::size_t i = 0; i < count; ++i) append(pool[i]->text, term);
    }
    for (const auto* term : {"flubromazolam", "clonazolam"}) {
      auto pool = posts_between(fbl, at(2009, 1, 1), at(2009, 12, 31));
      for (std::size_t i = 0; i < 3; ++i) append(pool[i]->text, term);
    }
    for (std::size_t k = 0; k < seeds_->early.size(); ++k) {
      const auto& term = seeds_->early[k];
      auto pool = posts_between(fdf, cutoff, end);
      for (std::size_t i = 0; i < 30; ++i) append(pool[i]->text, term);
      if (term == "tianeptine") {
        // Exactly at the cutoff instant: "at or before" disqualifies.
        seed_thread(fdf, "df-seed-tianeptine", "df-safe", cutoff, "tianeptine at midnight");
      } else {
        auto early = posts_between(fdf, at(2008, 6, 1), at(2011, 12, 1));
        append(early[0]->text, term);
      }
    }
    std::size_t rare_counts[] = {19, 19, 19, 18, 10, 5, 1};
    for (std::size_t k = 0; k < seeds_->rare.size(); ++k) {
      auto pool = posts_between(fdf, cutoff, end);
      for (std::size_t i = 0; i < rare_counts[k]; ++i) append(pool[i]->text, seeds_->rare[k]);
    }

    // Substance sightings with known first dates.
    seed_thread(fdf, "df-seed-synth", "df-stim", seeds_->synthacaine_df, "has anyone tried synthacaine yet");
    seed_thread(fbl, "bl-seed-synth", "bl-rc-new", seeds_->synthacaine_bl, "Synthacaine is showing up everywhere");
    for (auto* p : posts_between(fbl, seeds_->synthacaine_bl, end)) {
      if (chance(0.01)) append(p->text, "synthacaine");
    }
    for (auto* p : posts_between(fdf, seeds_->synthacaine_df, end)) {
      if (chance(0.01)) append(p->text, "synthacaine");
    }
    seed_thread(fbl, "bl-seed-diph", "bl-rc", seeds_->diphenidine_tie, "diphenidine dissociative report");
    {
      Tweet t{"tw-seed-diph", seeds_->diphenidine_tie, "tweeter_tie", "diphenidine available now", {}};
      tweets.push_back(t);
    }
    for (auto* p : posts_between(fdf, seeds_->diphenidine_tie, end)) {
      if (chance(0.02)) append(p->text, "Diphenidine");
    }

    auto late = at(2012, 6, 1);
    auto bl_pool = posts_between(fbl, late, end);
    for (std::size_t i = 0; i < seeds_->mexedrone_bl; ++i) append(bl_pool[i]->text, "mexedrone");
    auto df_pool = posts_between(fdf, late, end);
    for (std::size_t i = 0; i < seeds_->mexedrone_df; ++i) append(df_pool[i]->text, "Mexedrone");
    std::size_t added = 0;
    for (auto& t : tweets) {
      if (t.created_at > late && t.id.rfind("tw-seed", 0) != 0 && added < seeds_->mexedrone_tweets) {
        append(t.text, "MEXEDRONE");
        ++added;
      }
    }
    for (std::size_t i = 0; i < 6; ++i) {
      Tweet t{"tw-seed-synth-" + std::to_string(i), uniform_time(at(2012, 3, 1), end - std::chrono::hours{48}),
              "tweeter_s", "synthacaine " + words(2, 6), {}};
      tweets.push_back(t);
    }
  }

  static std::vector<std::string> matched(const std::string& text) {
    static const auto keywords = service::Config{}.keywords();
    std::vector<std::string> out;
    for (const auto& tok : token_set(text))
      if (keywords.contains(tok)) out.push_back(tok);
    return out;
  }

  std::vector<ShopSnapshot> make_snapshots(const std::vector<Date>& days) {
    std::vector<ShopSnapshot> out;
    const char* carried[] = {"MDAI",   "MDPV",    "Methylone",  "AB-CHMINACA", "Methiopropamine",
                             "1P-LSD", "Etizolam", "Ethylphenidate", "Diphenidine"};
    const char* units[] = {"1g", "5g", "10 pellets", "250mg"};
    auto shops = service::default_shops();
    for (const auto& shop : shops) {
      std::vector<ShopListing> base;
      std::size_t n = shop.shop_id == 1 ? 7 : 4 + static_cast<std::size_t>(shop.shop_id * 3 % 9);
      std::vector<std::string> names;
      for (const auto* c : carried)
        if (chance(0.4)) names.push_back(std::string(c) + " " + units[pick(4)]);
      if (seeds_->mexedrone_shops.contains(shop.shop_id)) names.push_back("Mexedrone Crystal");
      for (int k = 1; names.size() < n; ++k) names.push_back("Bath Salt Blend No. " + std::to_string(k));
      names.resize(n);
      if (seeds_->mexedrone_shops.contains(shop.shop_id) &&
          std::find(names.begin(), names.end(), "Mexedrone Crystal") == names.end())
        names.back() = "Mexedrone Crystal";
      for (const auto& name : names) {
        ShopListing l;
        l.name = name;
        if (!chance(0.1)) {
          l.price = static_cast<double>(std::uniform_int_distribution<int>(500, 9999)(rng_)) / 100.0;
          l.currency = "GBP";
        }
        if (chance(0.7)) l.unit = units[pick(4)];
        base.push_back(l);
      }
      for (std::size_t w = 0; w < days.size(); ++w) {
        ShopSnapshot s{shop.shop_id, shop.domain, days[w], base};
        // Prices move a little from week to week.
        for (auto& l : s.listings)
          if (l.price) *l.price = static_cast<double>(static_cast<long>(*l.price * 100 + 0.5) + static_cast<long>(w) * 25) / 100.0;
        out.push_back(std::move(s));
      }
    }
    return out;
  }

  std::mt19937_64 rng_;
  std::vector<std::string> filler_;
  Seeds* seeds_ = nullptr;
};

}  // namespace detail

inline Fixture generate(std::uint64_t seed = 20130603) { return detail::Builder(seed).build(); }

/// A forum whose posts-per-thread histogram mimics a board that stops
/// threads at 1,000 posts: 50 capped threads plus smaller ones, no other
/// size occurring 50 times.
inline Corpus capped_threads(std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  Forum f;
  f.id = "forum-cap";
  f.name = "Capped";
  f.sections.push_back(SectionNode{"cap-root", "Capped", std::nullopt, 0, {}});
  f.users.push_back(UserProfile{"cap-u1", f.id, "poster", std::nullopt, 0});
  std::vector<std::size_t> sizes(50, 1000);
  std::map<std::size_t, std::size_t> freq;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (sizes.size() < 150) {
    // Continuous power law (alpha 1.8) rounded down, capped below 1000.
    auto x = static_cast<std::size_t>(std::floor(std::pow(1.0 - u(rng), -1.0 / 0.8)));
    if (x < 1 || x >= 1000 || freq[x] >= 40) continue;
    ++freq[x];
    sizes.push_back(x);
  }
  std::size_t post = 0;
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    Thread th{"cap-t" + std::to_string(t), f.id, "cap-root", "thread", at(2011, 1, 1) + std::chrono::hours{t}};
    f.threads.push_back(th);
    for (std::size_t k = 0; k < sizes[t]; ++k)
      f.posts.push_back(Post{"cap-p" + std::to_string(post++), th.id, "cap-u1",
                             th.created_at + std::chrono::minutes{k}, "reply"});
  }
  Corpus c;
  c.forums.push_back(std::move(f));
  c.finalize();
  return c;
}

}  // namespace fixture
