#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "atlas/corpus.hpp"
#include "atlas/trajectory.hpp"
#include "atlas/tsne.hpp"

namespace atlas {

enum class PointKind { paper, trajectory_point, entity_overall };

struct EmbeddingPoint {
  std::string id;
  TopicVector vector;
  PointKind kind = PointKind::paper;
};

struct EmbeddingInput {
  std::vector<EmbeddingPoint> points;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Embedding2D {
  std::vector<std::string> ids;
  std::vector<Point2> coords;
  std::vector<KlSample> kl_trace;
  TsneOptions params;

  /// Throws BundleError naming the id when absent.
  const Point2& at(std::string_view id) const;
  const Point2* find(std::string_view id) const;
  std::size_t size() const noexcept { return ids.size(); }

  void rebuild_index();

private:
  std::unordered_map<std::string, std::size_t> index_;
};

/// Stable point ids shared by the embedding and the bundle.
std::string paper_point_id(std::string_view paper_id);
std::string trajectory_point_id(const EntityRef& entity, int year);
std::string overall_point_id(const EntityRef& entity);

/// Embeds every input vector at once. Ids must be unique and vectors equally long.
Embedding2D tsne(const EmbeddingInput& input, const TsneOptions& options = {});

/// One joint embedding of every paper column of H, every trajectory point and
/// every entity-overall vector.
Embedding2D reduce_map(const PublicationCorpus& corpus, const Eigen::MatrixXd& H,
                       const std::vector<Trajectory>& trajectories, const TsneOptions& options = {});

/// Writes "point_id,x,y" lines with a header.
void write_coords_csv(const Embedding2D& embedding, const std::string& path);

}  // namespace atlas
