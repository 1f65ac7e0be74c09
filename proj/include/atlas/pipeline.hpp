#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "atlas/coherence.hpp"
#include "atlas/corpus.hpp"
#include "atlas/mapbundle.hpp"
#include "atlas/nmf.hpp"
#include "atlas/trajectory.hpp"
#include "atlas/tsne.hpp"
#include "atlas/vectorize.hpp"

namespace atlas {

/// Candidate topic counts used when selection is requested without a list.
inline const std::vector<int> kDefaultTopicGrid{5, 10, 15, 20, 25, 30, 35, 40};

enum class TrainSubset { all, venue };
TrainSubset parse_train_subset(std::string_view text);

struct PipelineConfig {
  VocabularyOptions vocabulary;
  NmfOptions nmf;
  /// When non-empty, the topic count is chosen from these by C_V and nmf.topics is ignored.
  std::vector<int> topic_candidates;
  CoherenceOptions coherence;
  TrainSubset train_subset = TrainSubset::all;
  /// Venue regime: the model is fit on papers of the most prolific venues only.
  std::size_t train_venues = 30;
  TrajectoryOptions trajectory;
  TsneOptions tsne;
  BundleOptions bundle;
  LabelOverrides labels;
  std::size_t summary_terms = 10;
};

struct PipelineResult {
  TopicModel model;
  /// Topic weights of every corpus document (topics x documents).
  Matrix H;
  std::vector<TopicSummary> summaries;
  std::optional<TopicCountSelection> selection;
  std::vector<Trajectory> trajectories;
  Embedding2D embedding;
  MapBundle bundle;
};

/// Papers (corpus positions, ascending) the topic model is fit on.
std::vector<std::size_t> training_documents(const PublicationCorpus& corpus, TrainSubset subset,
                                            std::size_t venues);

/// Corpus -> TF-IDF -> NMF -> trajectories -> joint t-SNE -> bundle.
/// `stopwords` defaults to the built-in list.
PipelineResult run_pipeline(const PublicationCorpus& corpus, const PipelineConfig& config,
                            const StopWords* stopwords = nullptr);

/// Trajectories of every author and venue, authors first, each in name order.
std::vector<Trajectory> all_trajectories(const PublicationCorpus& corpus, const Matrix& H,
                                         const TrajectoryOptions& options = {});

}  // namespace atlas
