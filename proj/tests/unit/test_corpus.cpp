#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "atlas/corpus.hpp"
#include "atlas/error.hpp"
#include "synthetic.hpp"

using namespace atlas;
using atlas::testing::record;

namespace {

std::filesystem::path write_lines(const std::string& name, const std::vector<std::string>& lines) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  for (const auto& l : lines) out << l << "\n";
  return path;
}

std::string line(const std::string& id, int year = 2010, const std::string& authors = R"(["Ann Lee"])") {
  return R"({"id":")" + id + R"(","title":"sparse topic models","authors":)" + authors +
         R"(,"venue":"KDD","year":)" + std::to_string(year) + "}";
}

}  // namespace

TEST_CASE("records are indexed by author and venue") {
  auto corpus = PublicationCorpus::from_records({
      record("p1", "alpha beta", {"Ann", "Bob"}, "KDD", 2001),
      record("p2", "gamma delta", {"Bob"}, "ICML", 2003),
      record("p3", "epsilon", {"Ann", "Ann", ""}, "KDD", 2002),
  });
  REQUIRE(corpus.size() == 3);
  CHECK(corpus.author_index().at("Ann") == std::vector<std::size_t>{0, 2});
  CHECK(corpus.author_index().at("Bob") == std::vector<std::size_t>{0, 1});
  CHECK(corpus.venue_index().at("KDD") == std::vector<std::size_t>{0, 2});
  CHECK(corpus[2].authors == std::vector<std::string>{"Ann"});
  CHECK(corpus.year_range() == std::pair{2001, 2003});
  CHECK(corpus.find_paper("p2") == 1);
  CHECK_FALSE(corpus.find_paper("nope"));
  CHECK(entity_papers(corpus, {EntityKind::author, "Ann"}, 2002) == std::vector<std::size_t>{2});
  const auto venues = corpus.entities(EntityKind::venue);
  REQUIRE(venues.size() == 2);
  CHECK(venues[0].name == "ICML");
}

TEST_CASE("invalid records are skipped with reasons") {
  std::vector<PublicationRecord> records;
  for (int i = 0; i < 19; ++i) records.push_back(record("p" + std::to_string(i), "topic model", {"A"}, "V", 2000));
  records.push_back(record("bad", "topic model", {}, "V", 2000));
  LoadReport report;
  auto corpus = PublicationCorpus::from_records(records, {}, &report);
  CHECK(corpus.size() == 19);
  CHECK(report.skipped == 1);
  REQUIRE(report.skip_reasons.size() == 1);
  CHECK(report.skip_reasons[0] == "record 20: empty authors");
}

TEST_CASE("more than ten percent rejected is an error") {
  std::vector<PublicationRecord> records;
  for (int i = 0; i < 9; ++i) records.push_back(record("p" + std::to_string(i), "topic model", {"A"}, "V", 2000));
  records.push_back(record("old", "topic model", {"A"}, "V", 1200));
  CHECK_NOTHROW(PublicationCorpus::from_records(records));
  records.push_back(record("empty", "!!", {"A"}, "V", 2000));
  CHECK_THROWS_AS(PublicationCorpus::from_records(records), CorpusError);
}

TEST_CASE("duplicate ids are fatal") {
  CHECK_THROWS_WITH_AS(PublicationCorpus::from_records({record("x", "aa bb", {"A"}, "V", 2000),
                                                        record("x", "cc dd", {"B"}, "V", 2001)}),
                       "duplicate paper id 'x'", CorpusError);
}

TEST_CASE("load_corpus reads json lines") {
  const auto path = write_lines("atlas_ok.jsonl", {line("a"), "", line("b", 2012), "  "});
  LoadReport report;
  const auto corpus = load_corpus(path, {}, &report);
  CHECK(corpus.size() == 2);
  CHECK(report.lines == 2);
  CHECK(corpus[1].year == 2012);
  CHECK(corpus[0].abstract.empty());
}

TEST_CASE("malformed lines report their line number") {
  auto path = write_lines("atlas_bad.jsonl", {line("a"), "", "{not json"});
  CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("line 3:"), CorpusError);
  path = write_lines("atlas_bad2.jsonl", {line("a"), R"({"id":"b","title":"t","authors":"x","venue":"v","year":1})"});
  CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("line 2: key 'authors'"), CorpusError);
  path = write_lines("atlas_bad3.jsonl", {R"({"id":"b","title":"t","authors":[],"venue":"v","year":"2001"})"});
  CHECK_THROWS_WITH_AS(load_corpus(path), doctest::Contains("line 1: key 'year'"), CorpusError);
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), CorpusError);
}

TEST_CASE("skip reasons from files carry line numbers") {
  std::vector<std::string> lines;
  for (int i = 0; i < 12; ++i) lines.push_back(line("p" + std::to_string(i)));
  lines.insert(lines.begin() + 3, line("late", 2500));
  LoadReport report;
  load_corpus(write_lines("atlas_skip.jsonl", lines), {}, &report);
  REQUIRE(report.skip_reasons.size() == 1);
  CHECK(report.skip_reasons[0].rfind("line 4: year 2500", 0) == 0);
}

TEST_CASE("unknown entities come with suggestions") {
  auto corpus = PublicationCorpus::from_records({
      record("p1", "alpha", {"Schmidt"}, "KDD", 2001),
      record("p2", "beta", {"Schneider"}, "KDD", 2001),
      record("p3", "gamma", {"Miller"}, "KDD", 2001),
  });
  try {
    entity_papers(corpus, {EntityKind::author, "Schmitt"});
    FAIL("expected LookupError");
  } catch (const LookupError& e) {
    CHECK(e.suggestions() == std::vector<std::string>{"Schmidt", "Schneider"});
    CHECK(std::string(e.what()).find("did you mean") != std::string::npos);
  }
}

TEST_CASE("entity kind parsing") {
  CHECK(parse_entity_kind("venue") == EntityKind::venue);
  CHECK(to_string(EntityKind::author) == "author");
  CHECK_THROWS_AS(parse_entity_kind("paper"), std::invalid_argument);
}
