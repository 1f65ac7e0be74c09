#include "atlas/nmf.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/SVD>

#include "atlas/error.hpp"

namespace atlas {

namespace {

struct TruncatedSvd {
  Matrix U;  // w x k
  Vector S;  // k
  Matrix V;  // d x k
};

// Dense SVD up to this many matrix entries, randomized subspace iteration above.
constexpr double kDenseSvdLimit = 4.0e6;

TruncatedSvd truncated_svd(const SparseMatrix& X, int k, std::uint64_t seed) {
  const auto rows = X.rows();
  const auto cols = X.cols();
  if (static_cast<double>(rows) * static_cast<double>(cols) <= kDenseSvdLimit) {
    Eigen::BDCSVD<Matrix> svd(Matrix(X), Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU().leftCols(k), svd.singularValues().head(k), svd.matrixV().leftCols(k)};
  }

  // Halko-Martinsson-Tropp range finder with power iterations.
  const Eigen::Index sketch = std::min<Eigen::Index>(k + 10, std::min(rows, cols));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix omega(cols, sketch);
  for (Eigen::Index j = 0; j < omega.cols(); ++j)
    for (Eigen::Index i = 0; i < omega.rows(); ++i) omega(i, j) = gauss(rng);

  Matrix Q = Eigen::HouseholderQR<Matrix>(X * omega).householderQ() * Matrix::Identity(rows, sketch);
  for (int it = 0; it < 7; ++it) {
    Matrix Z = Eigen::HouseholderQR<Matrix>(X.transpose() * Q).householderQ() *
               Matrix::Identity(cols, sketch);
    Q = Eigen::HouseholderQR<Matrix>(X * Z).householderQ() * Matrix::Identity(rows, sketch);
  }
  Matrix B = (X.transpose() * Q).transpose();  // sketch x cols
  Eigen::BDCSVD<Matrix> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {Q * svd.matrixU().leftCols(k), svd.singularValues().head(k), svd.matrixV().leftCols(k)};
}

// NNDSVD (Boutsidis & Gallopoulos) with zero entries filled by mean(V).
void nndsvd_mean_fill(const SparseMatrix& V, int t, std::uint64_t seed, Matrix& W, Matrix& H) {
  const auto svd = truncated_svd(V, t, seed);
  W = Matrix::Zero(V.rows(), t);
  H = Matrix::Zero(t, V.cols());

  W.col(0) = std::sqrt(svd.S(0)) * svd.U.col(0).cwiseAbs();
  H.row(0) = std::sqrt(svd.S(0)) * svd.V.col(0).cwiseAbs().transpose();

  for (int j = 1; j < t; ++j) {
    const Vector x = svd.U.col(j);
    const Vector y = svd.V.col(j);
    const Vector xp = x.cwiseMax(0.0), yp = y.cwiseMax(0.0);
    const Vector xn = (-x).cwiseMax(0.0), yn = (-y).cwiseMax(0.0);
    const double xp_norm = xp.norm(), yp_norm = yp.norm();
    const double xn_norm = xn.norm(), yn_norm = yn.norm();
    const double positive = xp_norm * yp_norm;
    const double negative = xn_norm * yn_norm;

    Vector u, v;
    double sigma;
    if (positive > negative) {
      u = xp / xp_norm;
      v = yp / yp_norm;
      sigma = positive;
    } else {
      u = xn / xn_norm;
      v = yn / yn_norm;
      sigma = negative;
    }
    if (!(sigma > 0.0)) continue;  // zero singular direction; left for mean fill
    const double scale = std::sqrt(svd.S(j) * sigma);
    W.col(j) = scale * u;
    H.row(j) = scale * v.transpose();
  }

  constexpr double kSmall = 1e-6;
  const double mean = V.sum() / (static_cast<double>(V.rows()) * static_cast<double>(V.cols()));
  W = W.unaryExpr([&](double x) { return x < kSmall ? mean : x; });
  H = H.unaryExpr([&](double x) { return x < kSmall ? mean : x; });
}

double squared_norm(const SparseMatrix& V) { return V.squaredNorm(); }

// 0.5 * (||V||^2 - 2 <W, V H^T> + <W^T W, H H^T>), floored at zero.
double objective_from_parts(double v_norm2, const Matrix& W, const Matrix& VHt, const Matrix& WtW,
                            const Matrix& HHt) {
  const double cross = (W.array() * VHt.array()).sum();
  const double model = (WtW.array() * HHt.array()).sum();
  return std::max(0.0, 0.5 * (v_norm2 - 2.0 * cross + model));
}

bool converged(double previous, double current, double tol) {
  if (current == 0.0) return true;
  return std::abs(previous - current) / std::max(previous, 1e-300) < tol;
}

void check_vocabulary(const TopicModel& model, const TfIdfMatrix& V) {
  if (V.vocabulary.terms != model.vocabulary.terms ||
      V.terms() != static_cast<std::size_t>(model.W.rows()))
    throw ModelError("vocabulary mismatch between model (" + std::to_string(model.W.rows()) +
                     " terms) and input matrix (" + std::to_string(V.terms()) + " terms)");
}

}  // namespace

double frobenius_objective(const SparseMatrix& V, const Matrix& W, const Matrix& H) {
  const Matrix VHt = V * H.transpose();
  return objective_from_parts(squared_norm(V), W, VHt, W.transpose() * W, H * H.transpose());
}

TopicModel fit_nmf(const TfIdfMatrix& input, const NmfOptions& options) {
  const SparseMatrix& V = input.values;
  const auto w = V.rows();
  const auto d = V.cols();
  if (w == 0 || d == 0 || V.nonZeros() == 0) throw ModelError("input matrix is empty");
  const int t = options.topics;
  if (t < 1 || t > std::min(w, d))
    throw ModelError("topic count " + std::to_string(t) + " outside [1, " +
                     std::to_string(std::min(w, d)) + "]");
  if (options.max_iter < 1) throw ModelError("max_iter must be at least 1");
  if (!(options.tol > 0.0)) throw ModelError("tol must be positive");

  {
    Vector row_mass = Vector::Zero(w);
    for (Eigen::Index k = 0; k < V.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(V, k); it; ++it) row_mass(it.row()) += it.value();
    for (Eigen::Index i = 0; i < w; ++i)
      if (!(row_mass(i) > 0.0)) {
        const auto idx = static_cast<std::size_t>(i);
        throw ModelError("input matrix has an all-zero row (term '" +
                         (idx < input.vocabulary.terms.size() ? input.vocabulary.terms[idx]
                                                              : std::to_string(i)) +
                         "')");
      }
  }

  TopicModel model;
  model.topics = t;
  model.seed = options.seed;
  model.vocabulary = input.vocabulary;
  nndsvd_mean_fill(V, t, options.seed, model.W, model.H);

  Matrix& W = model.W;
  Matrix& H = model.H;
  const double v_norm2 = squared_norm(V);

  Matrix WtW = W.transpose() * W;
  Matrix HHt = H * H.transpose();
  Matrix VHt = V * H.transpose();
  model.objective_trace.push_back(objective_from_parts(v_norm2, W, VHt, WtW, HHt));

  for (int iter = 0; iter < options.max_iter; ++iter) {
    const Matrix WtV = (V.transpose() * W).transpose();
    H.array() *= WtV.array() / ((WtW * H).array() + kNmfEpsilon);

    HHt = H * H.transpose();
    VHt = V * H.transpose();
    W.array() *= VHt.array() / ((W * HHt).array() + kNmfEpsilon);
    WtW = W.transpose() * W;

    assert((W.array() >= 0.0).all() && (H.array() >= 0.0).all());

    const double current = objective_from_parts(v_norm2, W, VHt, WtW, HHt);
    const double previous = model.objective_trace.back();
    model.objective_trace.push_back(current);
    if (converged(previous, current, options.tol)) break;
  }

  for (int k = 0; k < t; ++k) {
    const double norm = W.col(k).norm();
    if (norm > 0.0) {
      W.col(k) /= norm;
      H.row(k) *= norm;
    }
  }
  return model;
}

Matrix transform(const TopicModel& model, const TfIdfMatrix& input, const TransformOptions& options) {
  check_vocabulary(model, input);
  const SparseMatrix& V = input.values;
  const Matrix& W = model.W;
  const Matrix WtW = W.transpose() * W;
  const Matrix WtV = (V.transpose() * W).transpose();
  const double v_norm2 = squared_norm(V);
  const auto d = V.cols();

  // Best single constant for every entry of H.
  double start = WtV.sum() / (static_cast<double>(d) * WtW.sum());
  if (!std::isfinite(start) || start <= 0.0) start = 1.0 / model.topics;
  Matrix H = Matrix::Constant(model.topics, d, start);
  if (d == 0) return H;

  auto objective = [&] {
    const double cross = (WtV.array() * H.array()).sum();
    const double fit = ((WtW * H).array() * H.array()).sum();
    return std::max(0.0, 0.5 * (v_norm2 - 2.0 * cross + fit));
  };

  double previous = objective();
  for (int iter = 0; iter < options.max_iter; ++iter) {
    H.array() *= WtV.array() / ((WtW * H).array() + kNmfEpsilon);
    const double current = objective();
    if (converged(previous, current, options.tol)) break;
    previous = current;
  }
  return H;
}

std::vector<int> ranked_terms(const TopicModel& model, int topic) {
  std::vector<int> order(static_cast<std::size_t>(model.W.rows()));
  std::iota(order.begin(), order.end(), 0);
  const auto column = model.W.col(topic);
  // Vocabulary terms are sorted, so ascending index is ascending term.
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return column(a) > column(b); });
  return order;
}

std::vector<TopicSummary> topic_summaries(const TopicModel& model, std::size_t n_terms,
                                          const LabelOverrides& labels) {
  std::vector<TopicSummary> out;
  for (int k = 0; k < model.topics; ++k) {
    TopicSummary summary;
    summary.topic_id = k;
    for (int id : ranked_terms(model, k)) {
      if (summary.top_terms.size() >= n_terms) break;
      const double weight = model.W(id, k);
      if (!(weight > 0.0)) break;
      summary.top_terms.emplace_back(model.vocabulary.terms[static_cast<std::size_t>(id)], weight);
    }
    if (auto it = labels.find(k); it != labels.end()) {
      summary.label = it->second;
    } else {
      for (std::size_t i = 0; i < summary.top_terms.size() && i < 3; ++i)
        summary.label += (i ? ", " : "") + summary.top_terms[i].first;
      if (summary.label.empty()) summary.label = "topic " + std::to_string(k);
    }
    out.push_back(std::move(summary));
  }
  return out;
}

}  // namespace atlas
