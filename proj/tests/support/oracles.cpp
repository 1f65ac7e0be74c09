#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace atlas::testing {

std::vector<double> cv_reference(const std::vector<std::vector<std::string>>& topics,
                                 const std::vector<std::vector<std::string>>& documents, std::size_t window) {
  std::vector<std::set<std::string>> windows;
  for (const auto& doc : documents) {
    if (doc.empty()) continue;
    if (doc.size() <= window) {
      windows.emplace_back(doc.begin(), doc.end());
      continue;
    }
    for (std::size_t s = 0; s + window <= doc.size(); ++s)
      windows.emplace_back(doc.begin() + static_cast<long>(s), doc.begin() + static_cast<long>(s + window));
  }
  const double n = static_cast<double>(windows.size());
  auto p = [&](const std::string& a, const std::string& b) {
    double hits = 0;
    for (const auto& w : windows)
      if (w.count(a) && w.count(b)) hits += 1;
    return hits / n;
  };

  std::vector<double> scores;
  for (const auto& topic : topics) {
    const std::size_t k = topic.size();
    std::vector<std::vector<double>> v(k, std::vector<double>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const double pi = p(topic[i], topic[i]), pj = p(topic[j], topic[j]);
        const double pij = p(topic[i], topic[j]);
        double value;
        if (pi == 0.0 || pj == 0.0) value = 0.0;
        else if (pij + 1e-12 >= 1.0) value = 1.0;
        else value = std::log((pij + 1e-12) / (pi * pj)) / -std::log(pij + 1e-12);
        v[i][j] = std::clamp(value, -1.0, 1.0);
      }
    std::vector<double> total(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) total[j] += v[i][j];
    double score = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double dot = 0, a = 0, b = 0;
      for (std::size_t j = 0; j < k; ++j) {
        dot += v[i][j] * total[j];
        a += v[i][j] * v[i][j];
        b += total[j] * total[j];
      }
      score += (a == 0 || b == 0) ? 0.0 : dot / std::sqrt(a * b);
    }
    scores.push_back(score / static_cast<double>(k));
  }
  return scores;
}

Eigen::MatrixXd exact_tsne_gradient(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Y, double exaggeration) {
  const auto n = Y.rows();
  Eigen::MatrixXd num(n, n);
  double z = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      num(i, j) = i == j ? 0.0 : 1.0 / (1.0 + (Y.row(i) - Y.row(j)).squaredNorm());
      z += num(i, j);
    }
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, 2);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double q = num(i, j) / z;
      grad.row(i) += 4.0 * (exaggeration * P(i, j) - q) * num(i, j) * (Y.row(i) - Y.row(j));
    }
  return grad;
}

double knn_purity(const std::vector<double>& coords, const std::vector<int>& labels, std::size_t k) {
  const std::size_t n = labels.size();
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = coords[2 * i] - coords[2 * j], dy = coords[2 * i + 1] - coords[2 * j + 1];
      d.emplace_back(dx * dx + dy * dy, j);
    }
    std::sort(d.begin(), d.end());
    std::size_t same = 0;
    for (std::size_t m = 0; m < k; ++m) same += labels[d[m].second] == labels[i];
    total += static_cast<double>(same) / static_cast<double>(k);
  }
  return total / static_cast<double>(n);
}

std::map<int, YearGroup> group_by_year(const Eigen::MatrixXd& H, const std::vector<std::size_t>& columns,
                                       const std::vector<int>& years) {
  std::map<int, YearGroup> groups;
  for (auto c : columns) {
    auto& g = groups[years[c]];
    if (g.count == 0) g.sum = Eigen::VectorXd::Zero(H.rows());
    g.sum += H.col(static_cast<Eigen::Index>(c));
    ++g.count;
  }
  return groups;
}

std::vector<SmoothedPoint> moving_average(const std::map<int, YearGroup>& groups, int window,
                                          std::size_t min_papers) {
  std::vector<SmoothedPoint> out;
  for (const auto& [year, _] : groups) {
    Eigen::VectorXd acc;
    int present = 0;
    std::size_t count = 0;
    for (int y = year - window + 1; y <= year; ++y) {
      auto it = groups.find(y);
      if (it == groups.end()) continue;
      Eigen::VectorXd c = it->second.sum / static_cast<double>(it->second.count);
      acc = present == 0 ? c : Eigen::VectorXd(acc + c);
      ++present;
      count += it->second.count;
    }
    if (count >= min_papers) out.push_back({year, acc / present, count});
  }
  return out;
}

}  // namespace atlas::testing
