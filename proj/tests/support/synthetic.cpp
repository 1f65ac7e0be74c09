#include "synthetic.hpp"

#include <algorithm>
#include <random>

namespace atlas::testing {

namespace {

const char* const kPrefixes[] = {"rho", "sig", "tau", "phi", "chi", "psi", "eta", "zet", "kap", "lam", "omi", "ups"};

std::vector<double> dirichlet(int k, double alpha, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> out(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (auto& v : out) sum += (v = gamma(rng));
  for (auto& v : out) v /= sum;
  return out;
}

}  // namespace

std::string planted_word(int topic, int index) {
  std::string word = kPrefixes[topic];
  word += static_cast<char>('a' + index / 26);
  word += static_cast<char>('a' + index % 26);
  return word;
}

int planted_topic(const std::string& term) {
  for (int t = 0; t < static_cast<int>(std::size(kPrefixes)); ++t)
    if (term.size() == 5 && term.compare(0, 3, kPrefixes[t]) == 0) return t;
  return -1;
}

std::vector<PlantedDocument> planted_documents(const PlantedOptions& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> word(0, o.words_per_topic - 1);
  std::uniform_int_distribution<int> year(0, o.years - 1);
  std::uniform_int_distribution<int> author(0, o.authors - 1);
  std::uniform_int_distribution<int> venue(0, o.venues - 1);
  std::uniform_int_distribution<int> author_count(1, 3);

  std::vector<PlantedDocument> docs;
  for (int d = 0; d < o.documents; ++d) {
    PlantedDocument doc;
    doc.mixture = dirichlet(o.topics, o.alpha, rng);
    std::discrete_distribution<int> topic(doc.mixture.begin(), doc.mixture.end());
    std::string text;
    for (int i = 0; i < o.tokens; ++i) {
      const int t = topic(rng);
      text += planted_word(t, word(rng));
      text += ' ';
    }
    text.pop_back();
    auto& r = doc.record;
    r.paper_id = "doc" + std::to_string(d);
    r.title = text;
    const int n_authors = author_count(rng);
    for (int a = 0; a < n_authors; ++a) r.authors.push_back("Author " + std::to_string(author(rng)));
    r.venue = "Venue " + std::to_string(venue(rng));
    r.year = o.first_year + year(rng);
    docs.push_back(std::move(doc));
  }
  return docs;
}

PublicationCorpus planted_corpus(const PlantedOptions& options) {
  std::vector<PublicationRecord> records;
  for (auto& d : planted_documents(options)) records.push_back(std::move(d.record));
  return PublicationCorpus::from_records(std::move(records));
}

PublicationRecord pure_record(const std::string& id, int topic, int tokens, int words_per_topic,
                              std::vector<std::string> authors, std::string venue, int year,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> word(0, words_per_topic - 1);
  std::string text;
  for (int i = 0; i < tokens; ++i) text += planted_word(topic, word(rng)) + " ";
  text.pop_back();
  return record(id, text, std::move(authors), std::move(venue), year);
}

PublicationCorpus pivot_corpus(int documents, std::uint64_t seed, int pivot_first_year) {
  PlantedOptions o;
  o.documents = documents - 18;
  o.seed = seed;
  std::vector<PublicationRecord> records;
  for (auto& d : planted_documents(o)) records.push_back(std::move(d.record));
  for (int y = 0; y < 6; ++y)
    for (int k = 0; k < 3; ++k) {
      const int topic = y < 3 ? 0 : 1;
      const std::string id = "pivot" + std::to_string(3 * y + k);
      records.push_back(pure_record(id, topic, o.tokens, o.words_per_topic, {kPivotAuthor},
                                    "Venue " + std::to_string(k), pivot_first_year + y,
                                    seed * 1000 + static_cast<std::uint64_t>(3 * y + k)));
    }
  return PublicationCorpus::from_records(std::move(records));
}

TfIdfMatrix as_tfidf(const SparseMatrix& values) {
  TfIdfMatrix m;
  m.values = values;
  m.vocabulary.document_count = static_cast<std::size_t>(values.cols());
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    std::string term = std::to_string(r);
    m.vocabulary.terms.push_back("w" + std::string(6 - term.size(), '0') + term);
    m.vocabulary.document_frequency.push_back(1);
  }
  reindex(m.vocabulary);
  return m;
}

SparseMatrix random_sparse(int rows, int cols, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> col(0, cols - 1);
  std::vector<Eigen::Triplet<double>> entries;
  for (int r = 0; r < rows; ++r) {
    bool any = false;
    for (int c = 0; c < cols; ++c)
      if (unit(rng) < density) {
        entries.emplace_back(r, c, unit(rng) + 0.01);
        any = true;
      }
    if (!any) entries.emplace_back(r, col(rng), unit(rng) + 0.01);
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

PublicationRecord record(std::string id, std::string title, std::vector<std::string> authors,
                         std::string venue, int year, std::string abstract) {
  PublicationRecord r;
  r.paper_id = std::move(id);
  r.title = std::move(title);
  r.abstract = std::move(abstract);
  r.authors = std::move(authors);
  r.venue = std::move(venue);
  r.year = year;
  return r;
}

}  // namespace atlas::testing
