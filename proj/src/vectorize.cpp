#include "atlas/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "atlas/error.hpp"

namespace atlas {

Vocabulary build_vocabulary(const PublicationCorpus& corpus, const StopWords& stopwords,
                            const VocabularyOptions& options) {
  std::vector<std::size_t> all(corpus.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return build_vocabulary(corpus, all, stopwords, options);
}

Vocabulary build_vocabulary(const PublicationCorpus& corpus, const std::vector<std::size_t>& documents,
                            const StopWords& stopwords, const VocabularyOptions& options) {
  if (options.min_df < 1) throw VocabularyError("min_df must be at least 1");
  if (!(options.max_df_ratio > 0.0 && options.max_df_ratio <= 1.0))
    throw VocabularyError("max_df_ratio must lie in (0, 1]");

  std::map<std::string, std::size_t> df;
  for (auto pos : documents) {
    const auto& record = corpus[pos];
    auto tokens = tokenize(record.title, record.abstract, stopwords);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[std::move(t)];
  }

  const double max_df = options.max_df_ratio * static_cast<double>(documents.size());
  Vocabulary vocab;
  vocab.document_count = documents.size();
  for (auto& [term, count] : df) {
    if (count < options.min_df || static_cast<double>(count) > max_df) continue;
    vocab.terms.push_back(term);
    vocab.document_frequency.push_back(count);
  }
  if (vocab.terms.empty())
    throw VocabularyError("vocabulary is empty after min_df=" + std::to_string(options.min_df) +
                          " / max_df_ratio=" + std::to_string(options.max_df_ratio) +
                          " filtering; the corpus is unusable");
  reindex(vocab);
  return vocab;
}

void reindex(Vocabulary& vocab) {
  vocab.term_to_index.clear();
  vocab.term_to_index.reserve(vocab.terms.size());
  for (std::size_t i = 0; i < vocab.terms.size(); ++i)
    vocab.term_to_index.emplace(vocab.terms[i], static_cast<int>(i));
}

std::vector<int> document_terms(const PublicationRecord& record, const Vocabulary& vocab) {
  // Stop words never reach the vocabulary, so no stop list is needed here.
  static const StopWords kNone;
  std::vector<int> ids;
  for (const auto& token : tokenize(record.title, record.abstract, kNone))
    if (int id = vocab.find(token); id >= 0) ids.push_back(id);
  return ids;
}

TfIdfMatrix tfidf(const PublicationCorpus& corpus, const Vocabulary& vocab) {
  const auto n = static_cast<double>(vocab.document_count);
  std::vector<double> idf(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i)
    idf[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(vocab.document_frequency[i]))) + 1.0;

  TfIdfMatrix out;
  out.vocabulary = vocab;
  std::vector<Eigen::Triplet<double>> triplets;
  std::map<int, double> counts;
  for (std::size_t doc = 0; doc < corpus.size(); ++doc) {
    counts.clear();
    for (int id : document_terms(corpus[doc], vocab)) counts[id] += 1.0;
    if (counts.empty()) {
      out.empty_documents.push_back(doc);
      continue;
    }
    double norm2 = 0.0;
    for (auto& [id, value] : counts) {
      value *= idf[static_cast<std::size_t>(id)];
      norm2 += value * value;
    }
    const double norm = std::sqrt(norm2);
    for (const auto& [id, value] : counts)
      triplets.emplace_back(id, static_cast<int>(doc), value / norm);
  }
  out.values.resize(static_cast<Eigen::Index>(vocab.size()), static_cast<Eigen::Index>(corpus.size()));
  out.values.setFromTriplets(triplets.begin(), triplets.end());
  out.values.makeCompressed();
  return out;
}

}  // namespace atlas
