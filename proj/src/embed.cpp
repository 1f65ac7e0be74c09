#include "atlas/embed.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <unordered_set>

#include "atlas/error.hpp"

namespace atlas {

void Embedding2D::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < ids.size(); ++i) index_.emplace(ids[i], i);
}

const Point2* Embedding2D::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &coords[it->second];
}

const Point2& Embedding2D::at(std::string_view id) const {
  if (const auto* p = find(id)) return *p;
  throw BundleError("embedding has no coordinates for point '" + std::string(id) + "'");
}

std::string paper_point_id(std::string_view paper_id) { return "paper:" + std::string(paper_id); }

std::string trajectory_point_id(const EntityRef& entity, int year) {
  return "traj:" + std::string(to_string(entity.kind)) + ":" + entity.name + ":" + std::to_string(year);
}

std::string overall_point_id(const EntityRef& entity) {
  return std::string(to_string(entity.kind)) + ":" + entity.name;
}

Embedding2D tsne(const EmbeddingInput& input, const TsneOptions& options) {
  const auto n = input.points.size();
  if (n == 0) throw EmbeddingError("nothing to embed");
  const auto dim = input.points.front().vector.size();

  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), dim);
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& point = input.points[i];
    if (!seen.insert(point.id).second) throw EmbeddingError("duplicate point id '" + point.id + "'");
    if (point.vector.size() != dim)
      throw EmbeddingError("point '" + point.id + "' has " + std::to_string(point.vector.size()) +
                           " dimensions, expected " + std::to_string(dim));
    X.row(static_cast<Eigen::Index>(i)) = point.vector.transpose();
  }

  auto result = run_tsne(X, options);
  Embedding2D out;
  out.params = options;
  out.params.observer = nullptr;
  out.kl_trace = std::move(result.kl_trace);
  out.ids.reserve(n);
  out.coords.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p{result.coords[2 * i], result.coords[2 * i + 1]};
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw EmbeddingError("non-finite coordinate for '" + input.points[i].id + "'");
    out.ids.push_back(input.points[i].id);
    out.coords.push_back(p);
  }
  out.rebuild_index();
  return out;
}

Embedding2D reduce_map(const PublicationCorpus& corpus, const Eigen::MatrixXd& H,
                       const std::vector<Trajectory>& trajectories, const TsneOptions& options) {
  if (static_cast<std::size_t>(H.cols()) != corpus.size())
    throw EmbeddingError("topic matrix columns do not match the corpus size");
  EmbeddingInput input;
  input.points.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    input.points.push_back({paper_point_id(corpus[i].paper_id), H.col(static_cast<Eigen::Index>(i)),
                            PointKind::paper});
  for (const auto& trajectory : trajectories) {
    if (trajectory.overall.size() != H.rows())
      throw EmbeddingError("trajectory of '" + trajectory.entity.name + "' has inconsistent topic count");
    for (const auto& point : trajectory.points)
      input.points.push_back({trajectory_point_id(trajectory.entity, point.year), point.weights,
                              PointKind::trajectory_point});
    input.points.push_back(
        {overall_point_id(trajectory.entity), trajectory.overall, PointKind::entity_overall});
  }
  return tsne(input, options);
}

void write_coords_csv(const Embedding2D& embedding, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw EmbeddingError("cannot write '" + path + "'");
  out << "point_id,x,y\n" << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < embedding.size(); ++i)
    out << embedding.ids[i] << ',' << embedding.coords[i].x << ',' << embedding.coords[i].y << '\n';
}

}  // namespace atlas
