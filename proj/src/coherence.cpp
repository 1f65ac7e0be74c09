#include "atlas/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "atlas/error.hpp"

namespace atlas {

WindowCounts::WindowCounts(std::vector<int> terms, std::size_t window)
    : terms_(std::move(terms)), window_(window) {
  if (window_ < 1) throw Error("window size must be at least 1");
  std::sort(terms_.begin(), terms_.end());
  terms_.erase(std::unique(terms_.begin(), terms_.end()), terms_.end());
  single_.assign(terms_.size(), 0);
  joint_.assign(terms_.size() * terms_.size(), 0);
}

int WindowCounts::slot(int term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
  if (it == terms_.end() || *it != term) return -1;
  return static_cast<int>(it - terms_.begin());
}

std::size_t WindowCounts::count(int term) const {
  const int s = slot(term);
  return s < 0 ? 0 : single_[static_cast<std::size_t>(s)];
}

std::size_t WindowCounts::count(int a, int b) const {
  const int sa = slot(a), sb = slot(b);
  if (sa < 0 || sb < 0) return 0;
  return joint_[static_cast<std::size_t>(sa) * terms_.size() + static_cast<std::size_t>(sb)];
}

double WindowCounts::probability(int term) const {
  return total_windows_ ? static_cast<double>(count(term)) / static_cast<double>(total_windows_) : 0.0;
}

double WindowCounts::probability(int a, int b) const {
  return total_windows_ ? static_cast<double>(count(a, b)) / static_cast<double>(total_windows_) : 0.0;
}

void WindowCounts::add_document(const std::vector<int>& tokens) {
  if (tokens.empty()) return;
  const std::size_t k = terms_.size();
  std::vector<int> slots(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) slots[i] = slot(tokens[i]);

  const std::size_t span = std::min(window_, tokens.size());
  const std::size_t windows = tokens.size() - span + 1;
  std::vector<std::size_t> in_window(k, 0);
  for (std::size_t i = 0; i < span; ++i)
    if (slots[i] >= 0) ++in_window[static_cast<std::size_t>(slots[i])];

  std::vector<std::size_t> present;
  for (std::size_t start = 0;; ++start) {
    present.clear();
    for (std::size_t s = 0; s < k; ++s)
      if (in_window[s]) present.push_back(s);
    for (auto a : present) {
      ++single_[a];
      for (auto b : present) ++joint_[a * k + b];
    }
    ++total_windows_;
    if (start + 1 == windows) break;
    if (slots[start] >= 0) --in_window[static_cast<std::size_t>(slots[start])];
    if (slots[start + span] >= 0) ++in_window[static_cast<std::size_t>(slots[start + span])];
  }
}

WindowCounts sliding_window_counts(const std::vector<std::vector<int>>& documents, std::size_t window,
                                   const std::vector<int>& terms) {
  WindowCounts counts(terms, window);
  for (const auto& doc : documents) counts.add_document(doc);
  return counts;
}

WindowCounts sliding_window_counts(const PublicationCorpus& corpus, const Vocabulary& vocab,
                                   std::size_t window, const std::vector<int>& terms) {
  WindowCounts counts(terms, window);
  for (const auto& record : corpus.records()) counts.add_document(document_terms(record, vocab));
  return counts;
}

double npmi(double p_a, double p_b, double p_ab) {
  if (p_a <= 0.0 || p_b <= 0.0) return 0.0;
  const double joint = p_ab + kNpmiEpsilon;
  if (joint >= 1.0) return 1.0;
  const double value = std::log(joint / (p_a * p_b)) / -std::log(joint);
  return std::clamp(value, -1.0, 1.0);
}

double cv_topic_score(const std::vector<int>& topic_terms, const WindowCounts& counts) {
  const std::size_t n = topic_terms.size();
  if (n == 0) return 0.0;
  // context[i][j] = NPMI(w_i, w_j), self pairs included.
  std::vector<std::vector<double>> context(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      context[i][j] = npmi(counts.probability(topic_terms[i]), counts.probability(topic_terms[j]),
                           counts.probability(topic_terms[i], topic_terms[j]));

  std::vector<double> total(n, 0.0);
  for (const auto& row : context)
    for (std::size_t j = 0; j < n; ++j) total[j] += row[j];
  double total_norm = 0.0;
  for (double x : total) total_norm += x * x;
  total_norm = std::sqrt(total_norm);

  double score = 0.0;
  for (const auto& row : context) {
    double dot = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      dot += row[j] * total[j];
      norm += row[j] * row[j];
    }
    norm = std::sqrt(norm);
    if (norm > 0.0 && total_norm > 0.0) score += dot / (norm * total_norm);
  }
  return score / static_cast<double>(n);
}

namespace {

CoherenceReport score_topics(const std::vector<std::vector<int>>& topics, const WindowCounts& counts,
                             std::size_t top_n) {
  CoherenceReport report;
  report.window = counts.window();
  report.top_n = top_n;
  for (const auto& topic : topics) report.per_topic.push_back(cv_topic_score(topic, counts));
  double sum = 0.0;
  for (double s : report.per_topic) sum += s;
  report.mean = report.per_topic.empty() ? 0.0 : sum / static_cast<double>(report.per_topic.size());
  return report;
}

std::vector<int> union_of(const std::vector<std::vector<int>>& topics) {
  std::set<int> all;
  for (const auto& topic : topics) all.insert(topic.begin(), topic.end());
  return {all.begin(), all.end()};
}

}  // namespace

CoherenceReport cv_coherence(const std::vector<std::vector<int>>& topics,
                             const std::vector<std::vector<int>>& documents, std::size_t window) {
  const auto counts = sliding_window_counts(documents, window, union_of(topics));
  return score_topics(topics, counts, topics.empty() ? 0 : topics.front().size());
}

CoherenceReport cv_coherence(const TopicModel& model, const PublicationCorpus& corpus,
                             const CoherenceOptions& options) {
  if (options.top_n < 2) throw Error("coherence top_n must be at least 2");
  std::vector<std::vector<int>> topics;
  for (int k = 0; k < model.topics; ++k) {
    auto ranked = ranked_terms(model, k);
    ranked.resize(std::min(ranked.size(), options.top_n));
    topics.push_back(std::move(ranked));
  }
  const auto counts = sliding_window_counts(corpus, model.vocabulary, options.window, union_of(topics));
  return score_topics(topics, counts, options.top_n);
}

TopicCountSelection select_topic_count(const TfIdfMatrix& V, const PublicationCorpus& corpus,
                                       const std::vector<int>& candidates, std::uint64_t seed,
                                       const NmfOptions& nmf, const CoherenceOptions& coherence) {
  if (candidates.empty()) throw Error("no topic-count candidates given");
  TopicCountSelection selection;
  bool any = false;
  for (int t : candidates) {
    CandidateScore score;
    score.topics = t;
    try {
      NmfOptions options = nmf;
      options.topics = t;
      options.seed = seed;
      const auto model = fit_nmf(V, options);
      score.mean_coherence = cv_coherence(model, corpus, coherence).mean;
      score.ok = true;
    } catch (const ModelError& e) {
      score.error = e.what();
    }
    if (score.ok) {
      const bool better = score.mean_coherence > selection.best_score + kCoherenceTieTolerance;
      const bool tie_smaller = std::abs(score.mean_coherence - selection.best_score) <=
                                   kCoherenceTieTolerance &&
                               t < selection.best_topics;
      if (!any || better || tie_smaller) {
        selection.best_topics = t;
        selection.best_score = score.mean_coherence;
      }
      any = true;
    }
    selection.candidates.push_back(std::move(score));
  }
  if (!any) {
    std::string msg = "every topic-count candidate failed";
    if (!selection.candidates.empty()) msg += " (first: " + selection.candidates.front().error + ")";
    throw ModelError(msg);
  }
  return selection;
}

}  // namespace atlas
