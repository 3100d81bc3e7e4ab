// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "expect_error.hpp"
#include "fixture.hpp"
#include "infoveil/index.hpp"
#include "infoveil/wordlists.hpp"
#include "oracles.hpp"

using namespace infoveil;
using fixture::at;
using fixture::day;

namespace {

// One forum with a two-level tree; posts are given as (section, time, text).
Corpus tiny(const std::vector<std::tuple<std::string, Timestamp, std::string>>& posts) {
  Forum f;
  f.id = "forum-t";
  f.name = "T";
  f.sections = {{"root", "Root", std::nullopt, 0, {"a", "b"}}, {"a", "A", "root", 0, {"a1"}},
                {"a1", "A1", "a", 0, {}},                     {"b", "B", "root", 0, {}}};
  for (const auto& s : {"root", "a", "a1", "b"})
    f.threads.push_back(Thread{std::string("t-") + s, f.id, s, "thread", at(2010, 1, 1)});
  int i = 0;
  for (const auto& [section, ts, text] : posts)
    f.posts.push_back(Post{"p" + std::to_string(i++), "t-" + section, "u1", ts, text});
  f.users.push_back(UserProfile{"u1", f.id, "user", std::nullopt, 0});
  Corpus c;
  c.forums.push_back(std::move(f));
  c.finalize();
  return c;
}

const fixture::Fixture& shared_fixture() {
  static const auto fx = fixture::generate();
  return fx;
}

const TermIndex& shared_index() {
  static const auto ix = TermIndex::build(shared_fixture().corpus);
  return ix;
}

const std::vector<oracle::Doc>& shared_docs() {
  static const auto docs = oracle::documents(shared_fixture().corpus);
  return docs;
}

}  // namespace

TEST(TermIndex, CountsDocumentsNotOccurrences) {
  std::vector<std::tuple<std::string, Timestamp, std::string>> posts;
  for (int i = 0; i < 50; ++i)
    posts.emplace_back("a", at(2010, 3, 1 + i % 28), i < 7 ? "mdai mdai mdai again" : "nothing relevant");
  auto ix = TermIndex::build(tiny(posts));
  auto march = bucket_of(at(2010, 3, 1), Granularity::month);
  EXPECT_EQ(ix.term_count("mdai", {}, march), (TermCount{7, 50}));
  EXPECT_EQ(ix.term_occurrences("mdai", {}, march), 21u);
  EXPECT_EQ(ix.term_count("absent", {}, march), (TermCount{0, 50}));
  EXPECT_EQ(ix.term_count("mdai", {}, bucket_of(at(2010, 4, 1), Granularity::month)), (TermCount{0, 0}));
}

TEST(TermIndex, SectionScopeIncludesDescendants) {
  auto ix = TermIndex::build(tiny({{"a", at(2010, 3, 2), "x1 mdai"},
                                   {"a1", at(2010, 3, 3), "x2 mdai"},
                                   {"b", at(2010, 3, 4), "x3 mdai"},
                                   {"root", at(2010, 3, 5), "x4"}}));
  auto m = bucket_of(at(2010, 3, 1), Granularity::month);
  EXPECT_EQ(ix.term_count("mdai", Scope{"forum-t", "a"}, m), (TermCount{2, 2}));
  EXPECT_EQ(ix.term_count("mdai", Scope{"forum-t", "a1"}, m), (TermCount{1, 1}));
  EXPECT_EQ(ix.term_count("mdai", Scope{"forum-t", "root"}, m), (TermCount{3, 4}));
  EXPECT_EQ(ix.term_count("mdai", Scope{"forum-t", std::nullopt}, m), (TermCount{3, 4}));
  EXPECT_ERROR_CODE(ix.term_count("mdai", Scope{"forum-t", "zz"}, m), ErrorCode::unknown_section);
  EXPECT_ERROR_CODE(ix.term_count("mdai", Scope{std::nullopt, "a"}, m), ErrorCode::unknown_section);
  EXPECT_ERROR_CODE(ix.term_count("mdai", Scope{"forum-zz", std::nullopt}, m), ErrorCode::unknown_forum);
}

TEST(TermIndex, CooccurrenceWeights) {
  auto ix = TermIndex::build(tiny({{"a", at(2010, 3, 2), "mephedrone plant-food the"},
                                   {"a", at(2010, 3, 3), "plant-food mephedrone mephedrone"},
                                   {"b", at(2010, 3, 4), "mephedrone plant-food bath"},
                                   {"b", at(2010, 3, 5), "mephedrone bath"},
                                   {"b", at(2010, 3, 6), "plant-food only"}}));
  auto top = ix.cooccurrence("mephedrone", {}, 10, wordlists::stopwords());
  ASSERT_GE(top.size(), 2u);
  EXPECT_EQ(top[0], (std::pair<std::string, std::size_t>{"plant-food", 3}));
  EXPECT_EQ(top[1], (std::pair<std::string, std::size_t>{"bath", 2}));
  for (const auto& [t, w] : top) EXPECT_NE(t, "the");
  EXPECT_EQ(ix.cooccurrence("mephedrone", {}, 1, {}, 1).at(0).first, "bath");
  EXPECT_TRUE(ix.cooccurrence("mephedrone", {}, 5, {}, 99).empty());
  EXPECT_ERROR_CODE(ix.cooccurrence("mephedrone", {}, 0, {}), ErrorCode::validation);
}

TEST(TermIndex, FirstOccurrenceAndSpan) {
  auto ix = TermIndex::build(tiny({{"a", at(2011, 5, 2), "late mdai"}, {"b", at(2010, 1, 7), "early mdai"}}));
  EXPECT_EQ(ix.first_occurrence("mdai", "forum-t"), at(2010, 1, 7));
  EXPECT_FALSE(ix.first_occurrence("mdai", "twitter"));
  EXPECT_FALSE(ix.first_occurrence("nope", "forum-t"));
  auto span = ix.span();
  ASSERT_TRUE(span);
  EXPECT_EQ(span->first, at(2010, 1, 7));
  EXPECT_EQ(span->second, at(2011, 5, 2));
}

TEST(TermIndex, SourcesCoverEveryFamily) {
  const auto& ix = shared_index();
  EXPECT_EQ(ix.sources(), (std::vector<std::string>{"forum-bl", "forum-df", "shops", "twitter"}));
  std::size_t listings = 0;
  for (const auto& s : shared_fixture().corpus.snapshots) listings += s.listings.size();
  EXPECT_EQ(ix.document_count(), 10000u + shared_fixture().corpus.tweets.size() + listings);
}

TEST(TermIndexProperty, PostingsAgreeWithForwardLists) {
  const auto& ix = shared_index();
  ASSERT_TRUE(std::is_sorted(ix.vocabulary().begin(), ix.vocabulary().end()));
  std::size_t forward_pairs = 0, posting_pairs = 0;
  for (std::uint32_t d = 0; d < ix.document_count(); ++d) {
    const auto& fw = ix.terms_of(d);
    forward_pairs += fw.size();
    for (const auto& e : fw) {
      const auto& p = ix.postings_of(e.term);
      ASSERT_TRUE(std::binary_search(p.begin(), p.end(), d));
      ASSERT_GE(e.count, 1u);
    }
  }
  for (std::uint32_t t = 0; t < ix.vocabulary_size(); ++t) {
    const auto& p = ix.postings_of(t);
    ASSERT_TRUE(std::is_sorted(p.begin(), p.end()));
    ASSERT_TRUE(std::adjacent_find(p.begin(), p.end()) == p.end());
    posting_pairs += p.size();
  }
  EXPECT_EQ(forward_pairs, posting_pairs);
}

TEST(TermIndexProperty, TermCountMatchesBruteForce) {
  const auto& fx = shared_fixture();
  const auto& ix = shared_index();
  const auto& docs = shared_docs();
  std::mt19937_64 rng(17);
  const std::vector<std::optional<std::string>> sources{std::nullopt, "forum-bl", "forum-df", "twitter", "shops"};
  for (int trial = 0; trial < 300; ++trial) {
    const auto& vocab = ix.vocabulary();
    auto term = vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(rng)];
    auto src = sources[std::uniform_int_distribution<std::size_t>(0, sources.size() - 1)(rng)];
    std::optional<std::string> section;
    if (src && fx.corpus.find_forum(*src) && trial % 2) {
      const auto& secs = fx.corpus.forum(*src).sections;
      section = secs[std::uniform_int_distribution<std::size_t>(0, secs.size() - 1)(rng)].id;
    }
    auto g = static_cast<Granularity>(trial % 3);
    auto ts = docs[std::uniform_int_distribution<std::size_t>(0, docs.size() - 1)(rng)].ts;
    auto b = bucket_of(ts, g);
    std::size_t with = 0, total = 0;
    for (const auto& p : oracle::trend(fx.corpus, docs, term, src, section, g))
      if (p.start == b.start) {
        with = p.with;
        total = p.total;
      }
    ASSERT_EQ(ix.term_count(term, Scope{src, section}, b), (TermCount{with, total}))
        << term << " " << src.value_or("*") << " " << section.value_or("*") << " " << b.label();
  }
}

TEST(TermIndexProperty, CooccurrenceMatchesBruteForce) {
  const auto& fx = shared_fixture();
  const auto& ix = shared_index();
  const auto& sw = wordlists::stopwords();
  for (const auto& term : {"mephedrone", "plant-food", "pentedrone", "mexedrone", "etizolam"}) {
    for (const auto& [src, sec] : std::vector<std::pair<std::optional<std::string>, std::optional<std::string>>>{
             {std::nullopt, std::nullopt}, {"forum-df", std::nullopt}, {"forum-df", "df-stim"}, {"twitter", std::nullopt}}) {
      auto want = oracle::cooccurrence(shared_docs(), fx.corpus, term, src, sec, 25, 3, sw);
      EXPECT_EQ(ix.cooccurrence(term, Scope{src, sec}, 25, sw, 3), want) << term;
    }
  }
}

TEST(TermIndex, JsonArtifactRoundTrip) {
  const auto& ix = shared_index();
  auto j = ix.to_json();
  auto back = TermIndex::from_json(j);
  EXPECT_EQ(back.to_json(), j);
  EXPECT_EQ(back.vocabulary(), ix.vocabulary());
  auto b = bucket_of(at(2010, 3, 1), Granularity::month);
  EXPECT_EQ(back.term_count("mephedrone", Scope{"forum-df", std::nullopt}, b),
            ix.term_count("mephedrone", Scope{"forum-df", std::nullopt}, b));
  EXPECT_EQ(back.first_occurrence("synthacaine", "forum-df"), ix.first_occurrence("synthacaine", "forum-df"));
}

TEST(TermIndexProperty, FirstOccurrenceIsEarliestPosting) {
  const auto& ix = shared_index();
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    auto t = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, ix.vocabulary_size() - 1)(rng));
    std::map<std::string, Timestamp> earliest;
    for (const auto& p : ix.postings(ix.vocabulary()[t])) {
      auto [it, fresh] = earliest.try_emplace(p.source, p.timestamp);
      if (!fresh) it->second = std::min(it->second, p.timestamp);
    }
    for (const auto& s : ix.sources()) {
      auto it = earliest.find(s);
      auto got = ix.first_occurrence(ix.vocabulary()[t], s);
      if (it == earliest.end()) ASSERT_FALSE(got);
      else ASSERT_EQ(got, it->second);
    }
  }
}
