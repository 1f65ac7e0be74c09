#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/SparseCore>

#include "atlas/corpus.hpp"
#include "atlas/text.hpp"

namespace atlas {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

struct Vocabulary {
  std::vector<std::string> terms;  // sorted, unique
  std::unordered_map<std::string, int> term_to_index;
  std::vector<std::size_t> document_frequency;
  /// Number of documents the frequencies were counted over; the idf base.
  std::size_t document_count = 0;

  std::size_t size() const noexcept { return terms.size(); }
  int find(const std::string& term) const {
    auto it = term_to_index.find(term);
    return it == term_to_index.end() ? -1 : it->second;
  }
  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms == b.terms && a.document_frequency == b.document_frequency &&
           a.document_count == b.document_count;
  }
};

struct VocabularyOptions {
  std::size_t min_df = 3;
  double max_df_ratio = 0.5;
};

/// Counts document frequencies over the tokenized corpus and keeps terms with
/// min_df <= df <= max_df_ratio * d, in lexicographic order.
Vocabulary build_vocabulary(const PublicationCorpus& corpus, const StopWords& stopwords,
                            const VocabularyOptions& options = {});

/// Same, restricted to the given document positions.
Vocabulary build_vocabulary(const PublicationCorpus& corpus, const std::vector<std::size_t>& documents,
                            const StopWords& stopwords, const VocabularyOptions& options = {});

/// Rebuilds the inverse map from `terms`; used after deserialization.
void reindex(Vocabulary& vocab);

struct TfIdfMatrix {
  SparseMatrix values;  // terms x documents
  Vocabulary vocabulary;
  /// Documents that contain no vocabulary term; their columns are all zero.
  std::vector<std::size_t> empty_documents;

  std::size_t terms() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t documents() const noexcept { return static_cast<std::size_t>(values.cols()); }
};

/// Raw term counts times smoothed idf ln((1 + n) / (1 + df)) + 1, where n is the
/// vocabulary's document_count; each non-empty column is then L2-normalized.
TfIdfMatrix tfidf(const PublicationCorpus& corpus, const Vocabulary& vocab);

/// In-vocabulary term ids of one document, in text order.
std::vector<int> document_terms(const PublicationRecord& record, const Vocabulary& vocab);

}  // namespace atlas
