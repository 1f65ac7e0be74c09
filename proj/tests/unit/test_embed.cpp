#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "atlas/embed.hpp"
#include "atlas/error.hpp"
#include "synthetic.hpp"

using namespace atlas;
using atlas::testing::record;

TEST_CASE("joint embedding covers papers, trajectory points and overall vectors") {
  std::vector<PublicationRecord> records;
  for (int i = 0; i < 10; ++i)
    records.push_back(record("p" + std::to_string(i), "words here", {i < 6 ? "Ann" : "Bob"}, "V", 2000 + (i % 2)));
  const auto corpus = PublicationCorpus::from_records(records);
  Eigen::MatrixXd H = Eigen::MatrixXd::Random(3, 10).cwiseAbs();

  // Ann: 3 papers in 2000, 3 in 2001 -> two smoothed points.
  const auto ann = build_trajectory(corpus, H, {EntityKind::author, "Ann"});
  REQUIRE(ann.points.size() == 2);
  TsneOptions opts;
  opts.perplexity = 3;
  opts.iterations = 50;
  const auto emb = reduce_map(corpus, H, {ann}, opts);
  CHECK(emb.size() == 13);
  CHECK(emb.find("paper:p3") != nullptr);
  CHECK(emb.find("traj:author:Ann:2001") != nullptr);
  CHECK(emb.find("author:Ann") != nullptr);
  CHECK_THROWS_WITH_AS(emb.at("paper:zzz"), doctest::Contains("paper:zzz"), BundleError);

  const auto path = std::filesystem::temp_directory_path() / "atlas_coords.csv";
  write_coords_csv(emb, path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "point_id,x,y");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 13);
}

TEST_CASE("embedding input validation") {
  EmbeddingInput in;
  for (int i = 0; i < 6; ++i) in.points.push_back({"p" + std::to_string(i), TopicVector::Ones(2) * i, PointKind::paper});
  TsneOptions opts;
  opts.perplexity = 1.5;
  opts.iterations = 10;
  CHECK_NOTHROW(tsne(in, opts));
  in.points[3].id = "p1";
  CHECK_THROWS_AS(tsne(in, opts), EmbeddingError);
  in.points[3].id = "p3";
  in.points[3].vector = TopicVector::Ones(3);
  CHECK_THROWS_AS(tsne(in, opts), EmbeddingError);
  CHECK_THROWS_AS(tsne(EmbeddingInput{}, opts), EmbeddingError);
}
