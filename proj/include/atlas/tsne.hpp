#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace atlas {

/// Gaussian conditional distribution over neighbors whose entropy (nats)
/// matches ln(perplexity). Bandwidth found by bisection on the precision,
/// stopping after 50 steps or once the entropy is within 1e-5.
/// `squared_distances` excludes the point itself; N = size + 1 must exceed perplexity.
std::vector<double> perplexity_calibration(std::span<const double> squared_distances, double perplexity);

/// Shannon entropy in nats.
double entropy(std::span<const double> distribution);

enum class DistanceMetric { euclidean, cosine };

using Affinities = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Symmetric joint P over each row's floor(3 * perplexity) nearest neighbors,
/// P_ij = (p_j|i + p_i|j) / 2N. Rows of X are points.
Affinities joint_probabilities(const Eigen::MatrixXd& X, double perplexity,
                               DistanceMetric metric = DistanceMetric::euclidean);

/// KL(P || Q) gradient at interleaved 2-D coordinates Y, attractive term scaled
/// by `exaggeration`, repulsion via Barnes-Hut with opening angle theta.
/// Returns the normalization Z used.
double tsne_gradient(const Affinities& P, std::span<const double> Y, double theta, double exaggeration,
                     std::span<double> gradient);

/// KL(P || Q) with Q normalized by a Barnes-Hut estimate of Z.
double kl_divergence(const Affinities& P, std::span<const double> Y, double theta);

struct TsneOptions {
  double perplexity = 30.0;
  int iterations = 1000;
  double theta = 0.5;
  double exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch = 250;
  /// Defaults to max(N / 12, 200).
  std::optional<double> learning_rate;
  std::uint64_t seed = 0;
  double init_stddev = 1e-4;
  int kl_interval = 50;
  DistanceMetric metric = DistanceMetric::euclidean;
  /// Called after every iteration with the number of completed iterations and the coordinates.
  std::function<void(int, std::span<const double>)> observer;
};

struct KlSample {
  int iteration = 0;
  double kl = 0.0;
};

struct TsneResult {
  std::vector<double> coords;  // interleaved x, y per input row
  std::vector<KlSample> kl_trace;
};

/// Barnes-Hut t-SNE of the rows of X into two dimensions.
TsneResult run_tsne(const Eigen::MatrixXd& X, const TsneOptions& options = {});

}  // namespace atlas
