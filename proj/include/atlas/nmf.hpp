#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "atlas/vectorize.hpp"

namespace atlas {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Multiplicative-update denominator guard.
inline constexpr double kNmfEpsilon = 1e-9;

struct NmfOptions {
  int topics = 10;
  std::uint64_t seed = 0;
  int max_iter = 400;
  double tol = 1e-4;
};

/// Fitted V ~ W H. W is terms x topics with unit-norm columns; H is topics x
/// documents and carries the scale.
struct TopicModel {
  Matrix W;
  Matrix H;
  int topics = 0;
  Vocabulary vocabulary;
  /// 0.5 * ||V - WH||_F^2 at initialization and after every iteration.
  std::vector<double> objective_trace;
  std::uint64_t seed = 0;

  double final_objective() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
};

/// NNDSVD initialization with zeros replaced by the mean of V, followed by
/// Lee-Seung multiplicative updates on the Frobenius loss. Stops when the
/// relative objective change drops below tol or after max_iter iterations.
TopicModel fit_nmf(const TfIdfMatrix& V, const NmfOptions& options);

/// 0.5 * ||V - WH||_F^2, evaluated without densifying V.
double frobenius_objective(const SparseMatrix& V, const Matrix& W, const Matrix& H);

struct TransformOptions {
  int max_iter = 1000;
  double tol = 1e-6;
};

/// Topic weights for new documents with W held fixed (H-updates only).
Matrix transform(const TopicModel& model, const TfIdfMatrix& V_new, const TransformOptions& options = {});

struct TopicSummary {
  int topic_id = 0;
  std::vector<std::pair<std::string, double>> top_terms;
  std::string label;
};

using LabelOverrides = std::map<int, std::string>;

/// Top `n_terms` positive-weight terms per topic (weight desc, then term asc).
/// Labels default to the top three terms joined by ", ".
std::vector<TopicSummary> topic_summaries(const TopicModel& model, std::size_t n_terms = 10,
                                          const LabelOverrides& labels = {});

/// Term ids of one W column ordered by weight desc, then term asc (zeros included).
std::vector<int> ranked_terms(const TopicModel& model, int topic);

/// JSON object mapping topic id (as a string) to label.
LabelOverrides load_label_overrides(const std::filesystem::path& path);

/// Writes <prefix>.vocab.txt, <prefix>.W.bin, <prefix>.H.bin and <prefix>.json.
void save_model(const TopicModel& model, const std::filesystem::path& prefix);
TopicModel load_model(const std::filesystem::path& prefix);

/// Dense matrix container: "ATLM" magic, uint32 version, uint64 rows, uint64
/// cols, then rows*cols little-endian float64 in column-major order.
void write_matrix(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix(const std::filesystem::path& path);

}  // namespace atlas
