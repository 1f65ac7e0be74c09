#include <cmath>
#include <set>

#include "atlas/mapbundle.hpp"

namespace atlas {

using nlohmann::json;

namespace {

class Checker {
public:
  explicit Checker(std::vector<std::string>& problems) : problems_(problems) {}

  bool object(const json& doc, const std::string& where) {
    if (doc.is_object()) return true;
    fail(where, "expected an object");
    return false;
  }

  const json* field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      fail(where, std::string("missing key '") + key + "'");
      return nullptr;
    }
    return &*it;
  }

  bool string(const json& obj, const char* key, const std::string& where) {
    const auto* v = field(obj, key, where);
    if (v && !v->is_string()) fail(where + "." + key, "expected a string");
    return v && v->is_string();
  }

  bool integer(const json& obj, const char* key, const std::string& where) {
    const auto* v = field(obj, key, where);
    if (v && !v->is_number_integer()) fail(where + "." + key, "expected an integer");
    return v && v->is_number_integer();
  }

  bool number(const json& obj, const char* key, const std::string& where) {
    const auto* v = field(obj, key, where);
    if (!v) return false;
    if (!v->is_number() || !std::isfinite(v->get<double>())) {
      fail(where + "." + key, "expected a finite number");
      return false;
    }
    return true;
  }

  bool boolean(const json& obj, const char* key, const std::string& where) {
    const auto* v = field(obj, key, where);
    if (v && !v->is_boolean()) fail(where + "." + key, "expected a boolean");
    return v && v->is_boolean();
  }

  const json* array(const json& obj, const char* key, const std::string& where) {
    const auto* v = field(obj, key, where);
    if (v && !v->is_array()) {
      fail(where + "." + key, "expected an array");
      return nullptr;
    }
    return v;
  }

  void fail(const std::string& where, const std::string& what) { problems_.push_back(where + ": " + what); }

private:
  std::vector<std::string>& problems_;
};

void check_stream(Checker& c, const json& doc, const std::string& where, int topics) {
  if (!c.object(doc, where)) return;
  const auto* years = c.array(doc, "years", where);
  const auto* shares = c.array(doc, "shares", where);
  if (!years || !shares) return;
  for (std::size_t i = 0; i < years->size(); ++i) {
    if (!(*years)[i].is_number_integer()) {
      c.fail(where + ".years", "non-integer year");
      return;
    }
    if (i > 0 && (*years)[i].get<int>() <= (*years)[i - 1].get<int>())
      c.fail(where + ".years", "years not strictly ascending");
  }
  if (topics >= 0 && static_cast<int>(shares->size()) != topics)
    c.fail(where + ".shares", "expected one row per topic");
  std::vector<double> column(years->size(), 0.0);
  for (const auto& row : *shares) {
    if (!row.is_array() || row.size() != years->size()) {
      c.fail(where + ".shares", "row length differs from years");
      return;
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j].is_number()) {
        c.fail(where + ".shares", "non-numeric share");
        return;
      }
      const double v = row[j].get<double>();
      if (v < 0.0 || v > 1.0) c.fail(where + ".shares", "share outside [0, 1]");
      column[j] += v;
    }
  }
  for (double sum : column)
    if (std::abs(sum - 1.0) > 1e-9 && sum != 0.0) c.fail(where + ".shares", "year column does not sum to 1");
}

void check_trajectory(Checker& c, const json& t, const std::string& where, int topics) {
  if (!c.object(t, where)) return;
  if (c.string(t, "kind", where) && t["kind"] != "author" && t["kind"] != "venue")
    c.fail(where + ".kind", "expected author or venue");
  c.string(t, "name", where);
  const auto* points = c.array(t, "points", where);
  if (!points) return;
  int last = 0;
  for (std::size_t i = 0; i < points->size(); ++i) {
    const auto& p = (*points)[i];
    const auto at = where + ".points[" + std::to_string(i) + "]";
    if (!c.object(p, at)) continue;
    c.number(p, "x", at);
    c.number(p, "y", at);
    c.integer(p, "paper_count", at);
    if (c.integer(p, "main_topic", at)) {
      const int k = p["main_topic"].get<int>();
      if (k != kUnassignedTopic && (k < 0 || (topics >= 0 && k >= topics)))
        c.fail(at + ".main_topic", "unknown topic");
    }
    if (c.integer(p, "year", at)) {
      const int year = p["year"].get<int>();
      if (i > 0 && year <= last) c.fail(at + ".year", "years not strictly ascending");
      last = year;
    }
  }
}

void check_point(Checker& c, const json& p, const std::string& where, int topics) {
  if (!c.object(p, where)) return;
  c.string(p, "id", where);
  if (c.string(p, "kind", where) && p["kind"] != "paper" && p["kind"] != "author" && p["kind"] != "venue")
    c.fail(where + ".kind", "expected paper, author or venue");
  c.number(p, "x", where);
  c.number(p, "y", where);
  if (c.integer(p, "main_topic", where)) {
    const int k = p["main_topic"].get<int>();
    if (k != kUnassignedTopic && (k < 0 || (topics >= 0 && k >= topics)))
      c.fail(where + ".main_topic", "unknown topic");
  }
  c.string(p, "topic_label", where);
  if (const auto* year = c.field(p, "year", where)) {
    const bool paper = p.value("kind", "") == "paper";
    if (paper && !year->is_number_integer()) c.fail(where + ".year", "papers need an integer year");
    if (!paper && !year->is_null()) c.fail(where + ".year", "entities carry a null year");
  }
  c.string(p, "label", where);
  c.string(p, "venue", where);
  if (const auto* authors = c.array(p, "authors", where))
    for (const auto& a : *authors)
      if (!a.is_string()) c.fail(where + ".authors", "non-string author");
  c.integer(p, "paper_count", where);
  c.boolean(p, "sampled", where);
  c.boolean(p, "reduced", where);
}

}  // namespace

std::vector<std::string> validate_stream(const json& doc, const std::string& where) {
  std::vector<std::string> problems;
  Checker c(problems);
  check_stream(c, doc, where, -1);
  return problems;
}

std::vector<std::string> validate_bundle(const json& doc) {
  std::vector<std::string> problems;
  Checker c(problems);
  if (!c.object(doc, "bundle")) return problems;

  if (c.integer(doc, "schema_version", "bundle") && doc["schema_version"] != kBundleSchemaVersion)
    c.fail("bundle.schema_version", "unsupported version");

  int topics = -1;
  if (const auto* list = c.array(doc, "topics", "bundle")) {
    topics = static_cast<int>(list->size());
    for (std::size_t i = 0; i < list->size(); ++i) {
      const auto& t = (*list)[i];
      const auto at = "topics[" + std::to_string(i) + "]";
      if (!c.object(t, at)) continue;
      if (c.integer(t, "id", at) && t["id"] != static_cast<int>(i)) c.fail(at + ".id", "ids must be 0..t-1 in order");
      c.string(t, "label", at);
      c.string(t, "color", at);
      c.integer(t, "size", at);
      if (const auto* terms = c.array(t, "top_terms", at))
        for (const auto& term : *terms) {
          if (!c.object(term, at + ".top_terms")) break;
          c.string(term, "term", at + ".top_terms");
          c.number(term, "weight", at + ".top_terms");
        }
      if (const auto* landmark = c.field(t, "landmark", at); landmark && c.object(*landmark, at + ".landmark")) {
        c.number(*landmark, "x", at + ".landmark");
        c.number(*landmark, "y", at + ".landmark");
      }
    }
  }

  if (const auto* points = c.array(doc, "points", "bundle")) {
    std::set<std::string> ids;
    for (std::size_t i = 0; i < points->size(); ++i) {
      const auto& p = (*points)[i];
      check_point(c, p, "points[" + std::to_string(i) + "]", topics);
      if (p.is_object() && p.contains("id") && p["id"].is_string() && !ids.insert(p["id"].get<std::string>()).second)
        c.fail("points[" + std::to_string(i) + "].id", "duplicate id");
    }
  }

  if (const auto* trajectories = c.array(doc, "trajectories", "bundle"))
    for (std::size_t i = 0; i < trajectories->size(); ++i)
      check_trajectory(c, (*trajectories)[i], "trajectories[" + std::to_string(i) + "]", topics);

  if (const auto* streams = c.field(doc, "streams", "bundle"); streams && c.object(*streams, "streams")) {
    if (const auto* global = c.field(*streams, "global", "streams")) check_stream(c, *global, "streams.global", topics);
    if (const auto* entities = c.array(*streams, "entities", "streams"))
      for (std::size_t i = 0; i < entities->size(); ++i) {
        const auto at = "streams.entities[" + std::to_string(i) + "]";
        const auto& s = (*entities)[i];
        check_stream(c, s, at, topics);
        if (s.is_object()) {
          c.string(s, "kind", at);
          c.string(s, "name", at);
        }
      }
  }

  if (const auto* config = c.field(doc, "config", "bundle"); config && c.object(*config, "config")) {
    c.integer(*config, "sample_seed", "config");
    c.number(*config, "sample_rate", "config");
    c.number(*config, "reduced_sample_factor", "config");
    if (const auto* range = c.array(*config, "year_range", "config");
        range && (range->size() != 2 || !(*range)[0].is_number_integer() || !(*range)[1].is_number_integer()))
      c.fail("config.year_range", "expected [min, max]");
    if (const auto* markers = c.field(*config, "markers", "config"); markers && c.object(*markers, "config.markers")) {
      c.string(*markers, "paper", "config.markers");
      c.string(*markers, "author", "config.markers");
      c.string(*markers, "venue", "config.markers");
    }
    c.array(*config, "palette", "config");
    if (const auto* unassigned = c.field(*config, "unassigned", "config");
        unassigned && c.object(*unassigned, "config.unassigned")) {
      c.integer(*unassigned, "topic", "config.unassigned");
      c.string(*unassigned, "color", "config.unassigned");
    }
    if (const auto* pipeline = c.field(*config, "pipeline", "config")) c.object(*pipeline, "config.pipeline");
  }
  return problems;
}

}  // namespace atlas
