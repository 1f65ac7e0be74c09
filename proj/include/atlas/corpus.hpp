#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace atlas {

struct PublicationRecord {
  std::string paper_id;
  std::string title;
  std::string abstract;
  std::vector<std::string> authors;
  std::string venue;
  int year = 0;
};

enum class EntityKind { author, venue };

std::string_view to_string(EntityKind kind);
/// Parses "author" / "venue"; throws std::invalid_argument otherwise.
EntityKind parse_entity_kind(std::string_view text);

struct EntityRef {
  EntityKind kind = EntityKind::author;
  std::string name;

  friend auto operator<=>(const EntityRef&, const EntityRef&) = default;
};

struct CorpusLimits {
  int min_year = 1900;
  int max_year = 2100;
  /// Loading fails once more than this fraction of non-blank lines is rejected.
  double max_rejected_fraction = 0.10;
};

struct LoadReport {
  std::size_t lines = 0;
  std::size_t accepted = 0;
  std::size_t skipped = 0;
  /// One human-readable reason per skipped line, prefixed with its line number.
  std::vector<std::string> skip_reasons;
};

using PaperIndex = std::map<std::string, std::vector<std::size_t>, std::less<>>;

/// Immutable, validated set of publication records. Record order is the
/// canonical document order for every downstream matrix.
class PublicationCorpus {
public:
  PublicationCorpus() = default;

  /// Validates and indexes in-memory records. Invalid records are skipped and
  /// reported; a duplicate paper id is a hard error.
  static PublicationCorpus from_records(std::vector<PublicationRecord> records,
                                        const CorpusLimits& limits = {},
                                        LoadReport* report = nullptr);

  const std::vector<PublicationRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const PublicationRecord& operator[](std::size_t i) const { return records_[i]; }

  const PaperIndex& author_index() const noexcept { return author_index_; }
  const PaperIndex& venue_index() const noexcept { return venue_index_; }
  const PaperIndex& index(EntityKind kind) const noexcept {
    return kind == EntityKind::author ? author_index_ : venue_index_;
  }

  std::pair<int, int> year_range() const noexcept { return year_range_; }

  std::optional<std::size_t> find_paper(std::string_view paper_id) const;

  /// Entities of one kind in name order.
  std::vector<EntityRef> entities(EntityKind kind) const;

  friend bool operator==(const PublicationCorpus&, const PublicationCorpus&);

private:
  friend PublicationCorpus load_corpus(const std::filesystem::path&, const CorpusLimits&,
                                       LoadReport*);
  static PublicationCorpus build(std::vector<PublicationRecord> records,
                                 std::span<const std::size_t> source_lines,
                                 const CorpusLimits& limits, LoadReport* report);

  std::vector<PublicationRecord> records_;
  PaperIndex author_index_;
  PaperIndex venue_index_;
  std::map<std::string, std::size_t, std::less<>> id_index_;
  std::pair<int, int> year_range_{0, 0};
};

bool operator==(const PublicationRecord& a, const PublicationRecord& b);

/// Reads line-delimited JSON records:
///   {"id": str, "title": str, "abstract": str?, "authors": [str], "venue": str, "year": int}
/// Blank lines are ignored. A line that is not a JSON object with correctly
/// typed keys is malformed and aborts the load with its line number.
PublicationCorpus load_corpus(const std::filesystem::path& path, const CorpusLimits& limits = {},
                              LoadReport* report = nullptr);

/// Positions of every paper by `entity`, optionally restricted to one year,
/// ascending. Throws LookupError with prefix-ranked suggestions when unknown.
std::vector<std::size_t> entity_papers(const PublicationCorpus& corpus, const EntityRef& entity,
                                       std::optional<int> year = std::nullopt);

/// Up to `limit` known names of `kind` ranked by shared case-insensitive prefix
/// length with `name` (ties by name). Names sharing no prefix are omitted.
std::vector<std::string> nearest_names(const PublicationCorpus& corpus, EntityKind kind,
                                       std::string_view name, std::size_t limit = 5);

}  // namespace atlas
