#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <thread>

// Eigen before httplib: resolv.h defines a _res macro.
#include "atlas/error.hpp"
#include "atlas/pipeline.hpp"
#include "atlas/server.hpp"
#include "synthetic.hpp"

#include <httplib.h>

using namespace atlas;
using nlohmann::json;

namespace {

const MapBundle& shared_bundle() {
  static const MapBundle bundle = [] {
    testing::PlantedOptions o;
    o.documents = 240;
    o.authors = 12;
    const auto corpus = testing::planted_corpus(o);
    PipelineConfig config;
    config.nmf.topics = 3;
    config.tsne.perplexity = 10;
    config.tsne.iterations = 300;
    config.bundle.sample_rate = 0.1;
    return run_pipeline(corpus, config).bundle;
  }();
  return bundle;
}

std::size_t sampled_papers_of(const MapBundle& b, const std::string& author) {
  std::size_t n = 0;
  for (const auto& p : b.points)
    if (p.kind == MapPointKind::paper && p.sampled &&
        std::find(p.authors.begin(), p.authors.end(), author) != p.authors.end())
      ++n;
  return n;
}

}  // namespace

TEST_CASE("search is a ranked case-insensitive substring match") {
  const BundleService service(shared_bundle());
  const auto r = service.search("AUTHOR 1", 5);
  CHECK(r.query == "AUTHOR 1");
  REQUIRE(r.matches.size() == 3);  // Author 1, Author 10, Author 11
  for (const auto& m : r.matches) CHECK(m.name.find("Author 1") == 0);
  for (std::size_t i = 1; i < r.matches.size(); ++i)
    CHECK(r.matches[i - 1].paper_count >= r.matches[i].paper_count);

  const auto venue = service.search("nue 3", 10);
  REQUIRE(venue.matches.size() == 1);
  CHECK(venue.matches[0].kind == EntityKind::venue);

  // prefix matches outrank substring matches regardless of size
  const auto any = service.search("u", 100);
  CHECK(any.matches.size() == 12 + 6);
  CHECK(service.search("", 4).matches.size() == 4);
  CHECK(service.search("zzz", 4).matches.empty());
}

TEST_CASE("entity detail ignores the sample") {
  const auto& bundle = shared_bundle();
  const BundleService service(bundle);
  const auto detail = service.entity_detail(EntityKind::author, "Author 3");
  CHECK(validate_entity_detail(detail).empty());
  const auto expected = detail["paper_count"].get<std::size_t>();
  CHECK(detail["papers"].size() == expected);
  CHECK(sampled_papers_of(bundle, "Author 3") < expected);
  for (const auto& p : detail["papers"]) {
    const auto authors = p["authors"].get<std::vector<std::string>>();
    CHECK(std::find(authors.begin(), authors.end(), "Author 3") != authors.end());
  }
  CHECK_THROWS_AS(service.entity_detail(EntityKind::author, "Author 99"), LookupError);
}

TEST_CASE("entity stream equals the stored per-entity stream") {
  const auto& bundle = shared_bundle();
  const BundleService service(bundle);
  for (const auto& s : bundle.entity_streams) {
    const auto r = service.get_stream(to_string(s.entity.kind), s.entity.name);
    CHECK(r.status == 200);
    CHECK(r.body == to_json(s.series).dump());
  }
  CHECK(service.get_stream(std::nullopt, std::nullopt).body == to_json(bundle.global_stream).dump());
  CHECK(service.get_stream("author", std::nullopt).status == 400);
  CHECK(service.get_stream("paper", "x").status == 400);
  CHECK(service.get_stream("venue", "Venue 77").status == 404);
}

TEST_CASE("venue trajectories are ordered by year") {
  const BundleService service(shared_bundle());
  const auto r = service.get_trajectory("venue", "Venue 2");
  REQUIRE(r.status == 200);
  const auto doc = json::parse(r.body);
  CHECK(validate_entity_detail(doc).empty());
  const auto& pts = doc["trajectory"];
  REQUIRE(pts.size() > 1);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i]["year"].get<int>() > pts[i - 1]["year"].get<int>());
}

TEST_CASE("unknown entities get 404 with suggestions") {
  const BundleService service(shared_bundle());
  const auto r = service.get_trajectory("author", "Author 1x");
  CHECK(r.status == 404);
  const auto doc = json::parse(r.body);
  CHECK(validate_error(doc).empty());
  CHECK_FALSE(doc["suggestions"].empty());
  CHECK(doc["suggestions"][0].get<std::string>().rfind("Author 1", 0) == 0);
  CHECK(service.get_trajectory("planet", "x").status == 400);
}

TEST_CASE("entity limit parsing") {
  const BundleService service(shared_bundle());
  CHECK(json::parse(service.get_entities("", "3").body)["matches"].size() == 3);
  CHECK(json::parse(service.get_entities("", std::nullopt).body)["matches"].size() == kDefaultSearchLimit);
  CHECK(json::parse(service.get_entities("", "100000").body)["matches"].size() == 18);
  CHECK(service.get_entities("", "-1").status == 400);
  CHECK(service.get_entities("", "ten").status == 400);
}

TEST_CASE("invalid bundles are refused") {
  auto broken = shared_bundle();
  broken.points[0].main_topic = 42;
  CHECK_THROWS_WITH_AS(BundleService{broken}, doctest::Contains("main_topic"), BundleError);
}

TEST_CASE("listen address parsing") {
  CHECK(parse_listen_address("127.0.0.1:8080") == std::pair<std::string, int>{"127.0.0.1", 8080});
  CHECK(parse_listen_address("[::1]:0").second == 0);
  CHECK_THROWS(parse_listen_address("localhost"));
  CHECK_THROWS(parse_listen_address("localhost:http"));
  CHECK_THROWS(parse_listen_address("h:70000"));
}

TEST_CASE("http endpoints") {
  const BundleService service(shared_bundle());
  const auto ui = std::filesystem::temp_directory_path() / "atlas_ui";
  std::filesystem::create_directories(ui);
  std::ofstream(ui / "index.html") << "<html>atlas</html>";

  HttpServer server(service, ui.string());
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/bundle");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(res->get_header_value("Content-Type") == "application/json");
  CHECK(validate_bundle(json::parse(res->body)).empty());
  const auto etag = res->get_header_value("ETag");
  CHECK_FALSE(etag.empty());

  auto again = client.Get("/api/bundle", {{"If-None-Match", etag}});
  REQUIRE(again);
  CHECK(again->status == 304);

  res = client.Get("/api/entities?q=sch&limit=5");
  REQUIRE(res);
  CHECK(validate_entity_query(json::parse(res->body)).empty());

  res = client.Get("/api/trajectory/author/Author%205");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body)["name"] == "Author 5");

  res = client.Get("/api/trajectory/author/Nobody");
  REQUIRE(res);
  CHECK(res->status == 404);

  res = client.Get("/api/stream?kind=venue&name=Venue%201");
  REQUIRE(res);
  CHECK(validate_stream(json::parse(res->body)).empty());

  res = client.Get("/");
  REQUIRE(res);
  CHECK(res->body == "<html>atlas</html>");

  server.stop();
  worker.join();
}
