#include "atlas/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

#include "atlas/embed.hpp"
#include "atlas/error.hpp"

namespace atlas {

TrainSubset parse_train_subset(std::string_view text) {
  if (text == "all") return TrainSubset::all;
  if (text == "venue") return TrainSubset::venue;
  throw std::invalid_argument("train subset must be 'all' or 'venue', got '" + std::string(text) + "'");
}

std::vector<std::size_t> training_documents(const PublicationCorpus& corpus, TrainSubset subset,
                                            std::size_t venues) {
  std::vector<std::size_t> docs;
  if (subset == TrainSubset::all) {
    docs.resize(corpus.size());
    for (std::size_t i = 0; i < docs.size(); ++i) docs[i] = i;
    return docs;
  }
  // Most prolific venues; ties by name.
  std::vector<std::pair<std::size_t, std::string_view>> ranked;
  for (const auto& [name, papers] : corpus.venue_index()) ranked.emplace_back(papers.size(), name);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  ranked.resize(std::min(ranked.size(), venues));
  for (const auto& [_, name] : ranked) {
    const auto& papers = corpus.venue_index().find(name)->second;
    docs.insert(docs.end(), papers.begin(), papers.end());
  }
  std::sort(docs.begin(), docs.end());
  return docs;
}

std::vector<Trajectory> all_trajectories(const PublicationCorpus& corpus, const Matrix& H,
                                         const TrajectoryOptions& options) {
  std::vector<Trajectory> out;
  for (auto kind : {EntityKind::author, EntityKind::venue})
    for (const auto& entity : corpus.entities(kind)) out.push_back(build_trajectory(corpus, H, entity, options));
  return out;
}

namespace {

PublicationCorpus subset_corpus(const PublicationCorpus& corpus, const std::vector<std::size_t>& docs) {
  std::vector<PublicationRecord> records;
  records.reserve(docs.size());
  for (auto i : docs) records.push_back(corpus[i]);
  return PublicationCorpus::from_records(std::move(records));
}

nlohmann::json describe(const PipelineConfig& config, const TopicModel& model, const Embedding2D& embedding) {
  const auto& t = embedding.params;
  return {{"min_df", config.vocabulary.min_df},
          {"max_df_ratio", config.vocabulary.max_df_ratio},
          {"vocabulary_size", model.vocabulary.size()},
          {"topics", model.topics},
          {"seed", model.seed},
          {"max_iter", config.nmf.max_iter},
          {"tol", config.nmf.tol},
          {"nmf_iterations", model.objective_trace.empty() ? 0 : model.objective_trace.size() - 1},
          {"train_subset", config.train_subset == TrainSubset::all ? "all" : "venue"},
          {"author_window", config.trajectory.author_window},
          {"author_min_papers", config.trajectory.author_min_papers},
          {"venue_min_papers", config.trajectory.venue_min_papers},
          {"perplexity", t.perplexity},
          {"tsne_iterations", t.iterations},
          {"theta", t.theta},
          {"final_kl", embedding.kl_trace.empty() ? 0.0 : embedding.kl_trace.back().kl}};
}

}  // namespace

PipelineResult run_pipeline(const PublicationCorpus& corpus, const PipelineConfig& config,
                            const StopWords* stopwords) {
  if (corpus.empty()) throw CorpusError("corpus is empty");
  const StopWords& stop = stopwords ? *stopwords : default_stopwords();

  const auto docs = training_documents(corpus, config.train_subset, config.train_venues);
  if (docs.empty()) throw ModelError("no training documents");
  const bool full = docs.size() == corpus.size();
  const PublicationCorpus train = full ? corpus : subset_corpus(corpus, docs);

  const Vocabulary vocab = build_vocabulary(train, stop, config.vocabulary);
  const TfIdfMatrix V = tfidf(train, vocab);

  PipelineResult result;
  NmfOptions nmf = config.nmf;
  if (!config.topic_candidates.empty()) {
    result.selection = select_topic_count(V, train, config.topic_candidates, nmf.seed, nmf, config.coherence);
    nmf.topics = result.selection->best_topics;
  }
  result.model = fit_nmf(V, nmf);
  result.H = full ? result.model.H : transform(result.model, tfidf(corpus, vocab));
  result.summaries = topic_summaries(result.model, config.summary_terms, config.labels);
  result.trajectories = all_trajectories(corpus, result.H, config.trajectory);

  TsneOptions tsne = config.tsne;
  tsne.seed = nmf.seed;
  result.embedding = reduce_map(corpus, result.H, result.trajectories, tsne);

  BundleOptions bundle = config.bundle;
  bundle.pipeline = describe(config, result.model, result.embedding);
  result.bundle = assemble_bundle(corpus, result.H, result.summaries, result.trajectories, result.embedding, bundle);
  return result;
}

}  // namespace atlas
