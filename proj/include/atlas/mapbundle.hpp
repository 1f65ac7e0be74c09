#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "atlas/corpus.hpp"
#include "atlas/embed.hpp"
#include "atlas/nmf.hpp"
#include "atlas/trajectory.hpp"

namespace atlas {

inline constexpr int kBundleSchemaVersion = 1;
inline constexpr const char* kUnassignedColor = "#9e9e9e";
inline constexpr const char* kUnassignedLabel = "unassigned";

/// Fixed 24-color topic palette, indexed by topic_id modulo its size.
const std::array<const char*, 24>& topic_palette();

enum class MapPointKind { paper, author, venue };
std::string_view to_string(MapPointKind kind);
MapPointKind parse_map_point_kind(std::string_view text);

struct StreamSeries {
  std::vector<int> years;                   // ascending
  std::vector<std::vector<double>> shares;  // [topic][year index]
  friend bool operator==(const StreamSeries&, const StreamSeries&) = default;
};

struct BundleTopic {
  int id = 0;
  std::string label;
  std::vector<std::pair<std::string, double>> top_terms;
  std::string color;
  /// Centroid of the 2-D positions of papers with this main topic; (0, 0) when empty.
  Point2 landmark;
  /// Number of papers with this main topic.
  std::size_t size = 0;
  friend bool operator==(const BundleTopic&, const BundleTopic&) = default;
};

struct MapPoint {
  std::string id;
  MapPointKind kind = MapPointKind::paper;
  double x = 0.0;
  double y = 0.0;
  int main_topic = kUnassignedTopic;
  std::string topic_label;
  std::optional<int> year;  // papers only
  std::string label;        // paper title or entity name
  std::string venue;
  std::vector<std::string> authors;
  std::size_t paper_count = 1;
  bool sampled = true;
  bool reduced = true;
  friend bool operator==(const MapPoint&, const MapPoint&) = default;
};

struct BundleTrajectoryPoint {
  int year = 0;
  double x = 0.0;
  double y = 0.0;
  int main_topic = kUnassignedTopic;
  std::size_t paper_count = 0;
  friend bool operator==(const BundleTrajectoryPoint&, const BundleTrajectoryPoint&) = default;
};

struct BundleTrajectory {
  EntityRef entity;
  std::vector<BundleTrajectoryPoint> points;
  friend bool operator==(const BundleTrajectory&, const BundleTrajectory&) = default;
};

struct EntityStream {
  EntityRef entity;
  StreamSeries series;
  friend bool operator==(const EntityStream&, const EntityStream&) = default;
};

struct BundleOptions {
  double sample_rate = 0.1;
  /// Fraction of the sample kept by the UI's reduced-sample toggle.
  double reduced_sample_factor = 0.25;
  std::uint64_t sample_seed = 0;
  /// Free-form pipeline parameters recorded under config.pipeline.
  nlohmann::json pipeline = nlohmann::json::object();
};

struct MapBundle {
  int schema_version = kBundleSchemaVersion;
  std::vector<BundleTopic> topics;
  std::vector<MapPoint> points;
  std::vector<BundleTrajectory> trajectories;
  StreamSeries global_stream;
  std::vector<EntityStream> entity_streams;
  BundleOptions options;
  std::pair<int, int> year_range{0, 0};

  friend bool operator==(const MapBundle& a, const MapBundle& b);
};

struct PaperSample {
  std::vector<bool> sampled;
  std::vector<bool> reduced;  // subset of sampled
};

/// Seeded sample without replacement of round(rate * count) positions, ascending.
std::vector<std::size_t> sample_papers(std::size_t count, double rate, std::uint64_t seed);

/// Membership flags for the sample and the nested reduced sample
/// (the first round(reduced_factor * k) of the same seeded permutation).
PaperSample draw_sample(std::size_t count, double rate, double reduced_factor, std::uint64_t seed);

/// Per-year share of each main topic over papers with an assigned main topic.
/// Input pairs are (year, main_topic).
StreamSeries stream_series(const std::vector<std::pair<int, int>>& papers, int topics);

/// Rounds to the 6 decimals used for serialized coordinates.
double round_coordinate(double value);

/// Joins corpus, document topic matrix H (topics x documents), topic summaries,
/// trajectories and the embedding into a bundle.
MapBundle assemble_bundle(const PublicationCorpus& corpus, const Eigen::MatrixXd& H,
                          const std::vector<TopicSummary>& topics,
                          const std::vector<Trajectory>& trajectories, const Embedding2D& embedding,
                          const BundleOptions& options = {});

nlohmann::json to_json(const MapBundle& bundle);
nlohmann::json to_json(const StreamSeries& series);
nlohmann::json to_json(const MapPoint& point);
nlohmann::json to_json(const BundleTrajectory& trajectory);

/// Inverse of to_json; throws BundleError on structural problems.
MapBundle bundle_from_json(const nlohmann::json& doc);

/// Compact JSON text plus trailing newline; byte-stable for equal bundles.
std::string serialize_bundle(const MapBundle& bundle);
MapBundle load_bundle(const std::string& path);
void save_bundle(const MapBundle& bundle, const std::string& path);

/// Structural diagnostics for a bundle document; empty when valid.
std::vector<std::string> validate_bundle(const nlohmann::json& doc);
std::vector<std::string> validate_stream(const nlohmann::json& doc, const std::string& where = "stream");

}  // namespace atlas
