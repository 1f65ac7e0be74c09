#pragma once

// Slow, obviously-correct reference computations. None of these call into the
// library code they check.

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace atlas::testing {

/// C_V by explicit window enumeration: each window becomes a std::set of words.
/// Documents shorter than the window are one window.
std::vector<double> cv_reference(const std::vector<std::vector<std::string>>& topics,
                                 const std::vector<std::vector<std::string>>& documents, std::size_t window);

/// Exact t-SNE gradient with dense P (n x n) and Y (n x 2), O(n^2).
Eigen::MatrixXd exact_tsne_gradient(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Y, double exaggeration);

/// Fraction of k-nearest neighbors (2-D, brute force) sharing each point's label,
/// averaged over points. `coords` is interleaved x, y.
double knn_purity(const std::vector<double>& coords, const std::vector<int>& labels, std::size_t k);

struct YearGroup {
  Eigen::VectorXd sum;
  std::size_t count = 0;
};

/// Per-year sums and counts of the given H columns, keyed by year.
std::map<int, YearGroup> group_by_year(const Eigen::MatrixXd& H, const std::vector<std::size_t>& columns,
                                       const std::vector<int>& years);

struct SmoothedPoint {
  int year;
  Eigen::VectorXd mean;
  std::size_t count;
};

/// For every year y with data: mean of the yearly centroids of {y-2, y-1, y}
/// that have data, count = their paper total; kept when count >= min_papers.
std::vector<SmoothedPoint> moving_average(const std::map<int, YearGroup>& groups, int window,
                                          std::size_t min_papers);

}  // namespace atlas::testing
