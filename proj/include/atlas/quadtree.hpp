#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace atlas {

/// Point-region quadtree over 2-D points stored as interleaved (x, y) pairs.
/// Internal cells keep their point count, center of mass and second moments
/// about it for Barnes-Hut with a quadrupole correction.
class QuadTree {
public:
  explicit QuadTree(std::span<const double> coords);

  struct Repulsion {
    double fx = 0.0;
    double fy = 0.0;
    /// Sum over j != i of 1 / (1 + |y_i - y_j|^2), approximated like the force.
    double sum_q = 0.0;
  };

  /// Unnormalized t-SNE repulsion on point i: sum_j q_ij^2 (y_i - y_j) with
  /// q_ij = 1 / (1 + d_ij^2). A cell of side s at distance r from y_i is
  /// summarized by its center of mass and second moments when s / r < theta;
  /// theta = 0 is exact.
  Repulsion repulsion(std::size_t i, double theta) const;

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t size() const noexcept { return coords_.size() / 2; }

private:
  struct Node {
    double cx, cy, half;           // cell center and half side
    double com_x = 0.0, com_y = 0.0;
    double mxx = 0.0, mxy = 0.0, myy = 0.0;  // sum of (p - com)(p - com)^T
    int count = 0;
    int first_child = -1;          // children are contiguous; -1 for leaves
    int first_point = -1;          // leaf point list head, linked through next_
  };

  void insert(int point);
  void subdivide(int node);
  int child_for(const Node& node, double x, double y) const;
  void accumulate_moments();

  std::span<const double> coords_;
  std::vector<Node> nodes_;
  std::vector<int> next_;
  std::vector<int> depth_;
};

}  // namespace atlas
