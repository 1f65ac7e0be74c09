#include "atlas/trajectory.hpp"

#include <iomanip>
#include <sstream>

#include "atlas/error.hpp"

namespace atlas {

TopicVector centroid(std::span<const TopicVector> vectors) {
  if (vectors.empty()) throw Error("centroid of an empty set");
  TopicVector sum = TopicVector::Zero(vectors.front().size());
  for (const auto& v : vectors) {
    if (v.size() != sum.size()) throw Error("centroid inputs differ in length");
    sum += v;
  }
  return sum / static_cast<double>(vectors.size());
}

int main_topic(const TopicVector& v) {
  int best = kUnassignedTopic;
  double best_weight = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (v(k) > best_weight) {
      best_weight = v(k);
      best = static_cast<int>(k);
    }
  return best;
}

YearlyCentroids yearly_centroids(const PublicationCorpus& corpus, const Eigen::MatrixXd& H,
                                 const EntityRef& entity) {
  if (static_cast<std::size_t>(H.cols()) != corpus.size())
    throw Error("topic matrix has " + std::to_string(H.cols()) + " columns for " +
                std::to_string(corpus.size()) + " documents");
  std::map<int, std::vector<TopicVector>> by_year;
  for (auto pos : entity_papers(corpus, entity))
    by_year[corpus[pos].year].push_back(H.col(static_cast<Eigen::Index>(pos)));

  YearlyCentroids out;
  for (const auto& [year, vectors] : by_year) out[year] = {centroid(vectors), vectors.size()};
  return out;
}

std::vector<TrajectoryPoint> smooth_author(const YearlyCentroids& yearly, std::size_t window,
                                           std::size_t min_papers) {
  if (window < 1) throw Error("smoothing window must be at least 1");
  std::vector<TrajectoryPoint> out;
  for (const auto& [year, _] : yearly) {
    std::vector<TopicVector> members;
    std::size_t count = 0;
    for (auto it = yearly.lower_bound(year - static_cast<int>(window) + 1);
         it != yearly.end() && it->first <= year; ++it) {
      members.push_back(it->second.centroid);
      count += it->second.paper_count;
    }
    if (count < min_papers) continue;
    TrajectoryPoint point;
    point.year = year;
    point.weights = centroid(members);
    point.paper_count = count;
    point.main_topic = main_topic(point.weights);
    out.push_back(std::move(point));
  }
  return out;
}

std::vector<TrajectoryPoint> venue_trajectory(const YearlyCentroids& yearly, std::size_t min_papers) {
  std::vector<TrajectoryPoint> out;
  for (const auto& [year, entry] : yearly) {
    if (entry.paper_count < min_papers) continue;
    out.push_back({year, entry.centroid, entry.paper_count, main_topic(entry.centroid)});
  }
  return out;
}

Trajectory build_trajectory(const PublicationCorpus& corpus, const Eigen::MatrixXd& H,
                            const EntityRef& entity, const TrajectoryOptions& options) {
  Trajectory trajectory;
  trajectory.entity = entity;
  const auto yearly = yearly_centroids(corpus, H, entity);
  trajectory.points = entity.kind == EntityKind::author
                          ? smooth_author(yearly, options.author_window, options.author_min_papers)
                          : venue_trajectory(yearly, options.venue_min_papers);

  std::vector<TopicVector> papers;
  for (auto pos : entity_papers(corpus, entity)) papers.push_back(H.col(static_cast<Eigen::Index>(pos)));
  trajectory.overall = centroid(papers);
  trajectory.paper_count = papers.size();
  return trajectory;
}

Heatmap heatmap_export(const Trajectory& trajectory, const std::vector<std::string>& topic_labels) {
  if (trajectory.points.empty()) throw Error("heatmap of an empty trajectory");
  const auto topics = trajectory.points.front().weights.size();
  Heatmap heatmap;
  heatmap.raw.resize(topics, static_cast<Eigen::Index>(trajectory.points.size()));
  for (std::size_t j = 0; j < trajectory.points.size(); ++j) {
    heatmap.years.push_back(trajectory.points[j].year);
    heatmap.raw.col(static_cast<Eigen::Index>(j)) = trajectory.points[j].weights;
  }
  for (Eigen::Index k = 0; k < topics; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    heatmap.topic_labels.push_back(idx < topic_labels.size() ? topic_labels[idx]
                                                             : "topic " + std::to_string(k));
  }
  const double max = heatmap.raw.maxCoeff();
  heatmap.scaled = max > 0.0 ? Eigen::MatrixXd(heatmap.raw / max)
                             : Eigen::MatrixXd::Zero(heatmap.raw.rows(), heatmap.raw.cols());
  return heatmap;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string heatmap_csv(const Heatmap& heatmap) {
  std::ostringstream out;
  out << "topic";
  for (int year : heatmap.years) out << ',' << year;
  out << '\n' << std::setprecision(6) << std::fixed;
  for (Eigen::Index k = 0; k < heatmap.scaled.rows(); ++k) {
    out << csv_field(heatmap.topic_labels[static_cast<std::size_t>(k)]);
    for (Eigen::Index j = 0; j < heatmap.scaled.cols(); ++j) out << ',' << heatmap.scaled(k, j);
    out << '\n';
  }
  return out.str();
}

}  // namespace atlas
