#include <doctest.h>

#include <random>
#include <set>

#include "atlas/coherence.hpp"
#include "atlas/error.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace atlas;

namespace {

std::vector<std::string> names(const std::vector<int>& ids) {
  std::vector<std::string> out;
  for (int i : ids) out.push_back("w" + std::to_string(i));
  return out;
}

std::vector<std::vector<std::string>> names(const std::vector<std::vector<int>>& docs) {
  std::vector<std::vector<std::string>> out;
  for (const auto& d : docs) out.push_back(names(d));
  return out;
}

}  // namespace

TEST_CASE("window counting examples") {
  // a=0, b=1
  auto counts = sliding_window_counts({{0, 1, 0}}, 2, {0, 1});
  CHECK(counts.total_windows() == 2);
  CHECK(counts.probability(0) == 1.0);
  CHECK(counts.probability(1) == 1.0);
  CHECK(counts.probability(0, 1) == 1.0);

  counts = sliding_window_counts({{0}}, 110, {0});
  CHECK(counts.total_windows() == 1);
  CHECK(counts.probability(0) == 1.0);

  counts = sliding_window_counts({{}, {2, 2}}, 5, {2, 3});
  CHECK(counts.total_windows() == 1);
  CHECK(counts.count(3) == 0);
  CHECK(counts.count(7) == 0);
}

TEST_CASE("window counts equal brute-force enumeration") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> term(0, 6), len(0, 9);
  std::vector<std::vector<int>> docs(5);
  for (auto& d : docs)
    for (int k = len(rng); k > 0; --k) d.push_back(term(rng));
  const std::vector<int> interest{0, 2, 3, 5};
  const auto counts = sliding_window_counts(docs, 3, interest);

  std::vector<std::set<int>> windows;
  for (const auto& d : docs) {
    if (d.empty()) continue;
    if (d.size() <= 3) windows.emplace_back(d.begin(), d.end());
    else
      for (std::size_t s = 0; s + 3 <= d.size(); ++s) windows.emplace_back(d.begin() + static_cast<long>(s), d.begin() + static_cast<long>(s) + 3);
  }
  CHECK(counts.total_windows() == windows.size());
  std::size_t total = 0;
  for (int a : interest) {
    total += counts.count(a);
    for (int b : interest) {
      std::size_t both = 0;
      for (const auto& w : windows) both += w.count(a) && w.count(b);
      CHECK(counts.count(a, b) == both);
      CHECK(counts.probability(a, b) == doctest::Approx(double(both) / double(windows.size())));
    }
  }
  CHECK(total <= interest.size() * counts.total_windows());
}

TEST_CASE("npmi edge cases") {
  CHECK(npmi(0.0, 0.5, 0.0) == 0.0);
  CHECK(npmi(1.0, 1.0, 1.0) == 1.0);
  CHECK(npmi(0.5, 0.5, 0.25) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(npmi(0.5, 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(npmi(0.5, 0.5, 0.0) == doctest::Approx(std::log(1e-12 / 0.25) / -std::log(1e-12)).epsilon(1e-12));
  for (double pa : {0.1, 0.4, 0.9})
    for (double pab : {0.0, 0.05, 0.1}) {
      const double v = npmi(pa, 0.3, std::min(pab, std::min(pa, 0.3)));
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    }
}

TEST_CASE("perfect co-occurrence scores one") {
  const auto report = cv_coherence({{0, 1}}, {{0, 1}, {1, 0, 2}, {0, 1}}, 110);
  CHECK(report.per_topic[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("independent pair has zero npmi") {
  // P(a) = P(b) = 1/2, P(a,b) = 1/4 over four one-window documents.
  const auto counts = sliding_window_counts({{0, 1}, {0}, {1}, {2}}, 110, {0, 1});
  CHECK(npmi(counts.probability(0), counts.probability(1), counts.probability(0, 1)) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("toy corpus agrees with the brute-force reference") {
  const std::vector<std::vector<int>> docs{{0, 1, 2, 0, 3}, {1, 2, 4, 5}, {6, 7, 6, 0},
                                           {3, 4, 5, 6, 7, 1}, {0, 2, 1}, {5, 7}};
  const std::vector<std::vector<int>> topics{{0, 1, 2}, {5, 6, 7}};
  const auto report = cv_coherence(topics, docs, 2);
  const auto expected = atlas::testing::cv_reference({names(topics[0]), names(topics[1])}, names(docs), 2);
  REQUIRE(report.per_topic.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(report.per_topic[k] - expected[k]) < 1e-9);
  CHECK(report.mean == doctest::Approx((report.per_topic[0] + report.per_topic[1]) / 2).epsilon(1e-12));
}

TEST_CASE("random corpora agree with the reference and stay in range") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> term(0, 11), len(1, 15);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<int>> docs(8);
    for (auto& d : docs)
      for (int k = len(rng); k > 0; --k) d.push_back(term(rng));
    std::vector<std::vector<int>> topics{{0, 1, 2, 3}, {4, 5, 6}, {7, 8, 9, 10, 11}};
    const std::size_t window = 1 + static_cast<std::size_t>(trial % 5);
    const auto report = cv_coherence(topics, docs, window);
    std::vector<std::vector<std::string>> named;
    for (const auto& t : topics) named.push_back(names(t));
    const auto expected = atlas::testing::cv_reference(named, names(docs), window);
    for (std::size_t k = 0; k < topics.size(); ++k) {
      CHECK(std::abs(report.per_topic[k] - expected[k]) < 1e-9);
      CHECK(report.per_topic[k] >= -1.0);
      CHECK(report.per_topic[k] <= 1.0);
    }
    // permuting topics permutes the scores
    const auto swapped = cv_coherence({topics[2], topics[0], topics[1]}, docs, window);
    CHECK(swapped.per_topic[0] == report.per_topic[2]);
    CHECK(swapped.mean == doctest::Approx(report.mean).epsilon(1e-12));
  }
}

TEST_CASE("term missing from every window contributes npmi zero") {
  const auto report = cv_coherence({{0, 1, 9}}, {{0, 1}, {0, 1, 2}}, 110);
  const auto expected = atlas::testing::cv_reference({{"w0", "w1", "w9"}}, {{"w0", "w1"}, {"w0", "w1", "w2"}}, 110);
  CHECK(report.per_topic[0] == doctest::Approx(expected[0]).epsilon(1e-12));
}

TEST_CASE("topic count selection") {
  testing::PlantedOptions o;
  o.documents = 120;
  const auto corpus = testing::planted_corpus(o);
  const auto V = tfidf(corpus, build_vocabulary(corpus, {}));

  SUBCASE("single candidate") {
    const auto sel = select_topic_count(V, corpus, {3}, 0);
    CHECK(sel.best_topics == 3);
    REQUIRE(sel.candidates.size() == 1);
    CHECK(sel.candidates[0].ok);
    CHECK(sel.best_score == sel.candidates[0].mean_coherence);
  }
  SUBCASE("failing candidates are reported, not fatal") {
    const auto sel = select_topic_count(V, corpus, {100000, 2}, 0);
    CHECK(sel.best_topics == 2);
    CHECK_FALSE(sel.candidates[0].ok);
    CHECK_FALSE(sel.candidates[0].error.empty());
    CHECK_THROWS_AS(select_topic_count(V, corpus, {0, 100000}, 0), ModelError);
  }
  SUBCASE("equal scores go to the smaller count") {
    // duplicate candidates have identical fits and scores
    const auto sel = select_topic_count(V, corpus, {4, 4}, 0);
    CHECK(sel.best_topics == 4);
  }
  SUBCASE("too few top terms") {
    CHECK_THROWS(select_topic_count(V, corpus, {3}, 0, {}, {1, 110}));
  }
}

TEST_CASE("degenerate corpus ties toward the smaller count") {
  // Every document holds the same four terms, so every topic's top terms
  // co-occur perfectly and all candidates score exactly 1.
  std::vector<PublicationRecord> records;
  for (int i = 0; i < 8; ++i)
    records.push_back(testing::record(std::to_string(i), "aa bb cc dd", {"A"}, "V", 2000));
  records.push_back(testing::record("x1", "ee ff", {"A"}, "V", 2000));
  const auto corpus = PublicationCorpus::from_records(records);
  const auto V = tfidf(corpus, build_vocabulary(corpus, {}, {1, 1.0}));
  const auto sel = select_topic_count(V, corpus, {2, 1}, 0, {}, {2, 110});
  CHECK(sel.candidates[0].mean_coherence == doctest::Approx(sel.candidates[1].mean_coherence));
  CHECK(sel.best_topics == 1);
}
