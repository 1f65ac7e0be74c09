#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "atlas/corpus.hpp"
#include "atlas/nmf.hpp"
#include "atlas/vectorize.hpp"

namespace atlas {

/// Boolean sliding-window occurrence counts for a set of terms of interest.
/// Each document contributes max(1, len - window + 1) windows (none if empty).
class WindowCounts {
public:
  WindowCounts() = default;
  WindowCounts(std::vector<int> terms, std::size_t window);

  std::size_t window() const noexcept { return window_; }
  std::size_t total_windows() const noexcept { return total_windows_; }
  const std::vector<int>& terms() const noexcept { return terms_; }

  /// Windows containing `term` (0 for terms outside the interest set).
  std::size_t count(int term) const;
  /// Windows containing both terms; count(a, a) == count(a).
  std::size_t count(int a, int b) const;

  double probability(int term) const;
  double probability(int a, int b) const;

  /// Adds the windows of one document given as a term-id sequence.
  void add_document(const std::vector<int>& tokens);

private:
  int slot(int term) const;

  std::vector<int> terms_;          // sorted
  std::size_t window_ = 1;
  std::size_t total_windows_ = 0;
  std::vector<std::size_t> single_;
  std::vector<std::size_t> joint_;  // k x k, symmetric
};

/// Windows are taken over each document's in-vocabulary token sequence.
WindowCounts sliding_window_counts(const PublicationCorpus& corpus, const Vocabulary& vocab,
                                   std::size_t window, const std::vector<int>& terms);

WindowCounts sliding_window_counts(const std::vector<std::vector<int>>& documents, std::size_t window,
                                   const std::vector<int>& terms);

/// Added to the joint probability inside NPMI.
inline constexpr double kNpmiEpsilon = 1e-12;

/// Normalized PMI in [-1, 1]. Zero when either marginal is zero; one when the
/// pair fills every window.
double npmi(double p_a, double p_b, double p_ab);

struct CoherenceOptions {
  std::size_t top_n = 10;
  std::size_t window = 110;
};

struct CoherenceReport {
  std::vector<double> per_topic;
  double mean = 0.0;
  std::size_t window = 0;
  std::size_t top_n = 0;
};

/// C_V of explicit topics (each a list of term ids) against the counts.
double cv_topic_score(const std::vector<int>& topic_terms, const WindowCounts& counts);

CoherenceReport cv_coherence(const std::vector<std::vector<int>>& topics,
                             const std::vector<std::vector<int>>& documents, std::size_t window);

/// C_V of a fitted model using each topic's top_n ranked terms.
CoherenceReport cv_coherence(const TopicModel& model, const PublicationCorpus& corpus,
                             const CoherenceOptions& options = {});

struct CandidateScore {
  int topics = 0;
  double mean_coherence = 0.0;
  bool ok = false;
  std::string error;
};

struct TopicCountSelection {
  int best_topics = 0;
  double best_score = 0.0;
  std::vector<CandidateScore> candidates;
};

/// Scores closer than this are ties, resolved toward the smaller topic count.
inline constexpr double kCoherenceTieTolerance = 1e-12;

/// Fits one model per candidate with the same seed and picks the highest mean C_V.
TopicCountSelection select_topic_count(const TfIdfMatrix& V, const PublicationCorpus& corpus,
                                       const std::vector<int>& candidates, std::uint64_t seed,
                                       const NmfOptions& nmf = {},
                                       const CoherenceOptions& coherence = {});

}  // namespace atlas
