#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "atlas/corpus.hpp"

namespace atlas {

using TopicVector = Eigen::VectorXd;

/// main_topic() result for an all-zero vector.
inline constexpr int kUnassignedTopic = -1;

struct YearlyCentroid {
  TopicVector centroid;
  std::size_t paper_count = 0;
};

using YearlyCentroids = std::map<int, YearlyCentroid>;

struct TrajectoryPoint {
  int year = 0;
  TopicVector weights;
  std::size_t paper_count = 0;
  int main_topic = kUnassignedTopic;
};

struct Trajectory {
  EntityRef entity;
  std::vector<TrajectoryPoint> points;  // strictly ascending years
  TopicVector overall;                  // unsmoothed centroid of all the entity's papers
  std::size_t paper_count = 0;
};

struct TrajectoryOptions {
  std::size_t author_window = 3;
  std::size_t author_min_papers = 3;
  std::size_t venue_min_papers = 1;
};

/// Component-wise mean. Throws on an empty list or mismatched lengths.
TopicVector centroid(std::span<const TopicVector> vectors);

/// Argmax with ties to the lowest index; kUnassignedTopic when nothing is positive.
int main_topic(const TopicVector& v);

/// Per-year centroid of the entity's document columns of H (topics x documents).
YearlyCentroids yearly_centroids(const PublicationCorpus& corpus, const Eigen::MatrixXd& H,
                                 const EntityRef& entity);

/// Moving average over the years {y - window + 1, ..., y} that are present;
/// the divisor is the number of present years and the count is their sum.
/// Points whose window count is below min_papers are dropped.
std::vector<TrajectoryPoint> smooth_author(const YearlyCentroids& yearly, std::size_t window = 3,
                                           std::size_t min_papers = 3);

/// Unsmoothed yearly centroids with at least min_papers papers.
std::vector<TrajectoryPoint> venue_trajectory(const YearlyCentroids& yearly, std::size_t min_papers = 1);

/// Authors are smoothed, venues are not.
Trajectory build_trajectory(const PublicationCorpus& corpus, const Eigen::MatrixXd& H,
                            const EntityRef& entity, const TrajectoryOptions& options = {});

/// Topics x years heatmap of a trajectory plus the same values divided by their maximum.
struct Heatmap {
  std::vector<int> years;
  std::vector<std::string> topic_labels;
  Eigen::MatrixXd raw;
  Eigen::MatrixXd scaled;
};

Heatmap heatmap_export(const Trajectory& trajectory, const std::vector<std::string>& topic_labels);

/// Scaled heatmap as CSV: header "topic,<year>...", one row per topic label.
std::string heatmap_csv(const Heatmap& heatmap);

}  // namespace atlas
