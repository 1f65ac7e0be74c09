#include "atlas/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atlas {

namespace {
constexpr int kMaxDepth = 48;
}

QuadTree::QuadTree(std::span<const double> coords) : coords_(coords) {
  const std::size_t n = coords.size() / 2;
  next_.assign(n, -1);
  if (n == 0) return;

  double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
  double max_x = -min_x, max_y = -min_x;
  for (std::size_t i = 0; i < n; ++i) {
    min_x = std::min(min_x, coords[2 * i]);
    max_x = std::max(max_x, coords[2 * i]);
    min_y = std::min(min_y, coords[2 * i + 1]);
    max_y = std::max(max_y, coords[2 * i + 1]);
  }
  const double half = std::max({max_x - min_x, max_y - min_y, 1e-12}) * 0.5 * (1.0 + 1e-9) + 1e-12;
  nodes_.reserve(2 * n + 1);
  depth_.reserve(2 * n + 1);
  nodes_.push_back(Node{0.5 * (min_x + max_x), 0.5 * (min_y + max_y), half});
  depth_.push_back(0);
  for (std::size_t i = 0; i < n; ++i) insert(static_cast<int>(i));
  accumulate_moments();
}

void QuadTree::accumulate_moments() {
  for (std::size_t p = 0; p < size(); ++p) {
    const double x = coords_[2 * p];
    const double y = coords_[2 * p + 1];
    int index = 0;
    while (true) {
      Node& node = nodes_[static_cast<std::size_t>(index)];
      const double dx = x - node.com_x;
      const double dy = y - node.com_y;
      node.mxx += dx * dx;
      node.mxy += dx * dy;
      node.myy += dy * dy;
      if (node.first_child < 0) break;
      index = child_for(node, x, y);
    }
  }
}

int QuadTree::child_for(const Node& node, double x, double y) const {
  return node.first_child + (x >= node.cx ? 1 : 0) + (y >= node.cy ? 2 : 0);
}

void QuadTree::subdivide(int index) {
  const Node parent = nodes_[static_cast<std::size_t>(index)];
  const double h = parent.half * 0.5;
  const int first = static_cast<int>(nodes_.size());
  for (int q = 0; q < 4; ++q) {
    nodes_.push_back(Node{parent.cx + ((q & 1) ? h : -h), parent.cy + ((q & 2) ? h : -h), h});
    depth_.push_back(depth_[static_cast<std::size_t>(index)] + 1);
  }
  Node& node = nodes_[static_cast<std::size_t>(index)];
  node.first_child = first;

  // Push the leaf's points down one level.
  int p = node.first_point;
  node.first_point = -1;
  while (p >= 0) {
    const int following = next_[static_cast<std::size_t>(p)];
    const double x = coords_[2 * static_cast<std::size_t>(p)];
    const double y = coords_[2 * static_cast<std::size_t>(p) + 1];
    Node& child = nodes_[static_cast<std::size_t>(child_for(nodes_[static_cast<std::size_t>(index)], x, y))];
    child.com_x = (child.com_x * child.count + x) / (child.count + 1);
    child.com_y = (child.com_y * child.count + y) / (child.count + 1);
    ++child.count;
    next_[static_cast<std::size_t>(p)] = child.first_point;
    child.first_point = p;
    p = following;
  }
}

void QuadTree::insert(int point) {
  const double x = coords_[2 * static_cast<std::size_t>(point)];
  const double y = coords_[2 * static_cast<std::size_t>(point) + 1];
  int index = 0;
  while (true) {
    Node& node = nodes_[static_cast<std::size_t>(index)];
    node.com_x = (node.com_x * node.count + x) / (node.count + 1);
    node.com_y = (node.com_y * node.count + y) / (node.count + 1);
    ++node.count;

    if (node.first_child >= 0) {
      index = child_for(node, x, y);
      continue;
    }
    const bool empty = node.count == 1;
    const bool at_floor = depth_[static_cast<std::size_t>(index)] >= kMaxDepth;
    if (empty || at_floor) {
      next_[static_cast<std::size_t>(point)] = node.first_point;
      node.first_point = point;
      return;
    }
    // Undo this level's accounting; subdivide re-distributes the old points and
    // the loop re-enters this node to descend.
    node.com_x = (node.com_x * node.count - x) / (node.count - 1);
    node.com_y = (node.com_y * node.count - y) / (node.count - 1);
    --node.count;
    subdivide(index);
  }
}

QuadTree::Repulsion QuadTree::repulsion(std::size_t i, double theta) const {
  Repulsion out;
  if (nodes_.empty()) return out;
  const double x = coords_[2 * i];
  const double y = coords_[2 * i + 1];

  std::vector<int> stack{0};
  stack.reserve(64);
  while (!stack.empty()) {
    const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (node.count == 0) continue;

    if (node.first_child < 0) {
      for (int p = node.first_point; p >= 0; p = next_[static_cast<std::size_t>(p)]) {
        if (static_cast<std::size_t>(p) == i) continue;
        const double dx = x - coords_[2 * static_cast<std::size_t>(p)];
        const double dy = y - coords_[2 * static_cast<std::size_t>(p) + 1];
        const double q = 1.0 / (1.0 + dx * dx + dy * dy);
        out.sum_q += q;
        out.fx += q * q * dx;
        out.fy += q * q * dy;
      }
      continue;
    }

    const double dx = x - node.com_x;
    const double dy = y - node.com_y;
    const double dist2 = dx * dx + dy * dy;
    const double side = 2.0 * node.half;
    if (dist2 > 0.0 && side * side < theta * theta * dist2) {
      // Second-order expansion about the center of mass; the first-order
      // term vanishes there.
      const double q = 1.0 / (1.0 + dist2);
      const double q2 = q * q, q3 = q2 * q;
      const double trace = node.mxx + node.myy;
      const double mrx = node.mxx * dx + node.mxy * dy;
      const double mry = node.mxy * dx + node.myy * dy;
      const double rmr = dx * mrx + dy * mry;
      out.sum_q += node.count * q - q2 * trace + 4.0 * q3 * rmr;
      const double radial = node.count * q2 - 2.0 * q3 * trace + 12.0 * q3 * q * rmr;
      out.fx += radial * dx - 4.0 * q3 * mrx;
      out.fy += radial * dy - 4.0 * q3 * mry;
      continue;
    }
    for (int c = 0; c < 4; ++c) stack.push_back(node.first_child + c);
  }
  return out;
}

}  // namespace atlas
