#include "atlas/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "atlas/error.hpp"
#include "atlas/quadtree.hpp"

namespace atlas {

double entropy(std::span<const double> distribution) {
  double h = 0.0;
  for (double p : distribution)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

std::vector<double> perplexity_calibration(std::span<const double> squared_distances, double perplexity) {
  const std::size_t n = squared_distances.size();
  if (!(perplexity > 0.0)) throw EmbeddingError("perplexity must be positive");
  if (static_cast<double>(n + 1) <= perplexity)
    throw EmbeddingError("perplexity " + std::to_string(perplexity) + " needs more than " +
                         std::to_string(n + 1) + " points; lower the perplexity");
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  if (n == 0) return p;

  const double d_min = *std::min_element(squared_distances.begin(), squared_distances.end());
  double mean = 0.0;
  for (double d : squared_distances) mean += d - d_min;
  mean /= static_cast<double>(n);

  const double target = std::log(perplexity);
  double beta = mean > 0.0 ? 1.0 / mean : 1.0;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  for (int step = 0; step < 50; ++step) {
    // Shift by the minimum distance so the nearest neighbor has weight one.
    double sum = 0.0, weighted = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double shifted = squared_distances[j] - d_min;
      p[j] = std::exp(-beta * shifted);
      sum += p[j];
      weighted += shifted * p[j];
    }
    const double h = std::log(sum) + beta * weighted / sum;
    for (auto& x : p) x /= sum;

    const double diff = h - target;
    if (std::abs(diff) < 1e-5) break;
    if (diff > 0.0) {
      lo = beta;
      beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
    } else {
      hi = beta;
      beta = 0.5 * (beta + lo);
    }
  }
  return p;
}

Affinities joint_probabilities(const Eigen::MatrixXd& X_in, double perplexity, DistanceMetric metric) {
  const auto n = static_cast<std::size_t>(X_in.rows());
  Eigen::MatrixXd X = X_in;
  if (metric == DistanceMetric::cosine) {
    // On unit vectors |a - b|^2 = 2 (1 - cos).
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double norm = X.row(i).norm();
      if (norm > 0.0) X.row(i) /= norm;
    }
  }
  const std::size_t k = std::min(n - 1, static_cast<std::size_t>(std::floor(3.0 * perplexity)));

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * n * k);
  std::vector<std::pair<double, std::size_t>> candidates(n - 1);
  std::vector<double> nearest(k);

  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = (X.row(static_cast<Eigen::Index>(i)) - X.row(static_cast<Eigen::Index>(j))).squaredNorm();
      candidates[c++] = {d, j};
    }
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                      candidates.end());
    for (std::size_t m = 0; m < k; ++m) nearest[m] = candidates[m].first;
    const auto conditional = perplexity_calibration(nearest, perplexity);
    for (std::size_t m = 0; m < k; ++m) {
      const auto j = candidates[m].second;
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), conditional[m]);
      triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), conditional[m]);
    }
  }

  Affinities P(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  P.setFromTriplets(triplets.begin(), triplets.end());
  P /= 2.0 * static_cast<double>(n);
  P.makeCompressed();
  return P;
}

double tsne_gradient(const Affinities& P, std::span<const double> Y, double theta, double exaggeration,
                     std::span<double> gradient) {
  const std::size_t n = Y.size() / 2;
  const QuadTree tree(Y);

  std::vector<double> rep(2 * n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = tree.repulsion(i, theta);
    rep[2 * i] = r.fx;
    rep[2 * i + 1] = r.fy;
    z += r.sum_q;
  }

  for (std::size_t i = 0; i < n; ++i) {
    double ax = 0.0, ay = 0.0;
    for (Affinities::InnerIterator it(P, static_cast<Eigen::Index>(i)); it; ++it) {
      const auto j = static_cast<std::size_t>(it.col());
      const double dx = Y[2 * i] - Y[2 * j];
      const double dy = Y[2 * i + 1] - Y[2 * j + 1];
      const double q = 1.0 / (1.0 + dx * dx + dy * dy);
      ax += it.value() * q * dx;
      ay += it.value() * q * dy;
    }
    gradient[2 * i] = 4.0 * (exaggeration * ax - rep[2 * i] / z);
    gradient[2 * i + 1] = 4.0 * (exaggeration * ay - rep[2 * i + 1] / z);
  }
  return z;
}

double kl_divergence(const Affinities& P, std::span<const double> Y, double theta) {
  const std::size_t n = Y.size() / 2;
  const QuadTree tree(Y);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) z += tree.repulsion(i, theta).sum_q;

  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (Affinities::InnerIterator it(P, static_cast<Eigen::Index>(i)); it; ++it) {
      if (!(it.value() > 0.0)) continue;
      const auto j = static_cast<std::size_t>(it.col());
      const double dx = Y[2 * i] - Y[2 * j];
      const double dy = Y[2 * i + 1] - Y[2 * j + 1];
      const double q = 1.0 / (1.0 + dx * dx + dy * dy) / z;
      kl += it.value() * std::log(it.value() / std::max(q, std::numeric_limits<double>::min()));
    }
  return kl;
}

TsneResult run_tsne(const Eigen::MatrixXd& X, const TsneOptions& options) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (n < 4) throw EmbeddingError("t-SNE needs at least 4 points, got " + std::to_string(n));
  if (options.perplexity > static_cast<double>(n - 1) / 3.0)
    throw EmbeddingError("perplexity " + std::to_string(options.perplexity) + " too large for " +
                         std::to_string(n) + " points; use at most " +
                         std::to_string(static_cast<double>(n - 1) / 3.0));
  if (options.iterations < 1) throw EmbeddingError("iterations must be at least 1");
  if (options.theta < 0.0) throw EmbeddingError("theta must be non-negative");

  const Affinities P = joint_probabilities(X, options.perplexity, options.metric);
  const double learning_rate =
      options.learning_rate.value_or(std::max(static_cast<double>(n) / 12.0, 200.0));

  TsneResult result;
  auto& Y = result.coords;
  Y.resize(2 * n);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, options.init_stddev);
  for (auto& y : Y) y = gauss(rng);

  std::vector<double> gradient(2 * n), update(2 * n, 0.0), gains(2 * n, 1.0);
  for (int iter = 0; iter < options.iterations; ++iter) {
    const double exaggeration = iter < options.exaggeration_iterations ? options.exaggeration : 1.0;
    const double momentum = iter < options.momentum_switch ? options.initial_momentum : options.final_momentum;
    tsne_gradient(P, Y, options.theta, exaggeration, gradient);

    for (std::size_t i = 0; i < 2 * n; ++i) {
      if (!std::isfinite(gradient[i]))
        throw EmbeddingError("non-finite t-SNE gradient at iteration " + std::to_string(iter));
      // Delta-bar-delta gains.
      gains[i] = (gradient[i] > 0.0) != (update[i] > 0.0) ? gains[i] + 0.2 : gains[i] * 0.8;
      gains[i] = std::max(gains[i], 0.01);
      update[i] = momentum * update[i] - learning_rate * gains[i] * gradient[i];
      Y[i] += update[i];
    }

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += Y[2 * i];
      my += Y[2 * i + 1];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      Y[2 * i] -= mx;
      Y[2 * i + 1] -= my;
    }

    if (options.observer) options.observer(iter + 1, Y);
    if (options.kl_interval > 0 &&
        ((iter + 1) % options.kl_interval == 0 || iter + 1 == options.iterations))
      result.kl_trace.push_back({iter + 1, kl_divergence(P, Y, options.theta)});
  }
  return result;
}

}  // namespace atlas
