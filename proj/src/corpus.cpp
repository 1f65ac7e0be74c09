#include "atlas/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "atlas/error.hpp"
#include "atlas/text.hpp"

namespace atlas {

using nlohmann::json;

std::string_view to_string(EntityKind kind) {
  return kind == EntityKind::author ? "author" : "venue";
}

EntityKind parse_entity_kind(std::string_view text) {
  if (text == "author") return EntityKind::author;
  if (text == "venue") return EntityKind::venue;
  throw std::invalid_argument("unknown entity kind '" + std::string(text) +
                              "' (expected author or venue)");
}

bool operator==(const PublicationRecord& a, const PublicationRecord& b) {
  return a.paper_id == b.paper_id && a.title == b.title && a.abstract == b.abstract &&
         a.authors == b.authors && a.venue == b.venue && a.year == b.year;
}

bool operator==(const PublicationCorpus& a, const PublicationCorpus& b) {
  return a.records_ == b.records_ && a.author_index_ == b.author_index_ &&
         a.venue_index_ == b.venue_index_ && a.year_range_ == b.year_range_;
}

namespace {

// Returns an empty string when the record is acceptable, else the reason.
std::string validate(PublicationRecord& record, const CorpusLimits& limits) {
  if (record.paper_id.empty()) return "empty id";
  if (record.title.empty()) return "empty title";
  if (record.venue.empty()) return "empty venue";

  std::vector<std::string> authors;
  for (auto& name : record.authors) {
    if (name.empty()) continue;
    if (std::find(authors.begin(), authors.end(), name) == authors.end())
      authors.push_back(std::move(name));
  }
  record.authors = std::move(authors);
  if (record.authors.empty()) return "empty authors";

  if (record.year < limits.min_year || record.year > limits.max_year)
    return "year " + std::to_string(record.year) + " outside [" +
           std::to_string(limits.min_year) + ", " + std::to_string(limits.max_year) + "]";

  static const StopWords kNone;
  if (tokenize(record.title, record.abstract, kNone).empty()) return "no usable tokens";
  return {};
}

void check_rejection_rate(const LoadReport& report, const CorpusLimits& limits) {
  if (report.lines == 0) return;
  const double rate = static_cast<double>(report.skipped) / static_cast<double>(report.lines);
  if (rate > limits.max_rejected_fraction) {
    std::ostringstream msg;
    msg << report.skipped << " of " << report.lines << " records rejected, above the limit of "
        << limits.max_rejected_fraction * 100.0 << "%";
    if (!report.skip_reasons.empty()) msg << " (first: " << report.skip_reasons.front() << ")";
    throw CorpusError(msg.str());
  }
}

}  // namespace

PublicationCorpus PublicationCorpus::from_records(std::vector<PublicationRecord> records,
                                                  const CorpusLimits& limits,
                                                  LoadReport* report_out) {
  return build(std::move(records), {}, limits, report_out);
}

PublicationCorpus PublicationCorpus::build(std::vector<PublicationRecord> records,
                                           std::span<const std::size_t> source_lines,
                                           const CorpusLimits& limits, LoadReport* report_out) {
  LoadReport report;
  report.lines = records.size();

  PublicationCorpus corpus;
  corpus.records_.reserve(records.size());
  int min_year = std::numeric_limits<int>::max();
  int max_year = std::numeric_limits<int>::min();

  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& record = records[i];
    if (auto reason = validate(record, limits); !reason.empty()) {
      ++report.skipped;
      const bool from_file = i < source_lines.size();
      report.skip_reasons.push_back((from_file ? "line " : "record ") +
                                    std::to_string(from_file ? source_lines[i] : i + 1) + ": " +
                                    reason);
      continue;
    }
    if (corpus.id_index_.contains(record.paper_id))
      throw CorpusError("duplicate paper id '" + record.paper_id + "'");

    const std::size_t pos = corpus.records_.size();
    corpus.id_index_.emplace(record.paper_id, pos);
    for (const auto& author : record.authors) corpus.author_index_[author].push_back(pos);
    corpus.venue_index_[record.venue].push_back(pos);
    min_year = std::min(min_year, record.year);
    max_year = std::max(max_year, record.year);
    corpus.records_.push_back(std::move(record));
  }
  report.accepted = corpus.records_.size();
  if (!corpus.records_.empty()) corpus.year_range_ = {min_year, max_year};

  check_rejection_rate(report, limits);
  if (report_out) *report_out = std::move(report);
  return corpus;
}

std::optional<std::size_t> PublicationCorpus::find_paper(std::string_view paper_id) const {
  auto it = id_index_.find(paper_id);
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<EntityRef> PublicationCorpus::entities(EntityKind kind) const {
  std::vector<EntityRef> out;
  for (const auto& [name, _] : index(kind)) out.push_back({kind, name});
  return out;
}

namespace {

std::string require_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw CorpusError("line " + std::to_string(line) + ": key '" + key +
                      "' missing or not a string");
  return it->get<std::string>();
}

PublicationRecord parse_line(const std::string& text, std::size_t line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CorpusError("line " + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
  if (!obj.is_object())
    throw CorpusError("line " + std::to_string(line) + ": expected a JSON object");

  PublicationRecord record;
  record.paper_id = require_string(obj, "id", line);
  record.title = require_string(obj, "title", line);
  record.venue = require_string(obj, "venue", line);

  if (auto it = obj.find("abstract"); it != obj.end() && !it->is_null()) {
    if (!it->is_string())
      throw CorpusError("line " + std::to_string(line) + ": key 'abstract' is not a string");
    record.abstract = it->get<std::string>();
  }

  auto authors = obj.find("authors");
  if (authors == obj.end() || !authors->is_array())
    throw CorpusError("line " + std::to_string(line) + ": key 'authors' missing or not an array");
  for (const auto& a : *authors) {
    if (!a.is_string())
      throw CorpusError("line " + std::to_string(line) + ": non-string entry in 'authors'");
    record.authors.push_back(a.get<std::string>());
  }

  auto year = obj.find("year");
  if (year == obj.end() || !year->is_number_integer())
    throw CorpusError("line " + std::to_string(line) + ": key 'year' missing or not an integer");
  record.year = year->get<int>();
  return record;
}

}  // namespace

PublicationCorpus load_corpus(const std::filesystem::path& path, const CorpusLimits& limits,
                              LoadReport* report_out) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot read corpus file '" + path.string() + "'");

  std::vector<PublicationRecord> records;
  std::vector<std::size_t> line_of;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    records.push_back(parse_line(text, line));
    line_of.push_back(line);
  }
  if (in.bad()) throw CorpusError("I/O error while reading '" + path.string() + "'");

  return PublicationCorpus::build(std::move(records), line_of, limits, report_out);
}

std::vector<std::string> nearest_names(const PublicationCorpus& corpus, EntityKind kind,
                                       std::string_view name, std::size_t limit) {
  const std::string query = to_lower_ascii(name);
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& [candidate, _] : corpus.index(kind)) {
    const std::string lower = to_lower_ascii(candidate);
    const auto [q, c] = std::mismatch(query.begin(), query.end(), lower.begin(), lower.end());
    const auto shared = static_cast<std::size_t>(q - query.begin());
    if (shared > 0) scored.emplace_back(shared, candidate);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < limit; ++i) out.push_back(scored[i].second);
  return out;
}

std::vector<std::size_t> entity_papers(const PublicationCorpus& corpus, const EntityRef& entity,
                                       std::optional<int> year) {
  const auto& index = corpus.index(entity.kind);
  auto it = index.find(entity.name);
  if (it == index.end()) {
    auto suggestions = nearest_names(corpus, entity.kind, entity.name);
    std::string msg = "unknown " + std::string(to_string(entity.kind)) + " '" + entity.name + "'";
    if (!suggestions.empty()) {
      msg += "; did you mean: ";
      for (std::size_t i = 0; i < suggestions.size(); ++i)
        msg += (i ? ", " : "") + suggestions[i];
    }
    throw LookupError(msg, std::move(suggestions));
  }
  if (!year) return it->second;
  std::vector<std::size_t> out;
  for (auto pos : it->second)
    if (corpus[pos].year == *year) out.push_back(pos);
  return out;
}

}  // namespace atlas
