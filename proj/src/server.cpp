#include "atlas/server.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>

#include <httplib.h>

#include "atlas/error.hpp"
#include "atlas/text.hpp"

namespace atlas {

using nlohmann::json;

std::string strong_etag(std::string_view body) {
  // FNV-1a, 64 bit.
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : body) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "\"%016llx\"", static_cast<unsigned long long>(hash));
  return buf;
}

HttpResponse json_response(int status, const json& body) {
  HttpResponse response;
  response.status = status;
  response.body = body.dump();
  response.etag = strong_etag(response.body);
  return response;
}

json to_json(const EntityQueryResult& result) {
  json matches = json::array();
  for (const auto& m : result.matches)
    matches.push_back({{"kind", to_string(m.kind)}, {"name", m.name}, {"paper_count", m.paper_count}});
  return {{"query", result.query}, {"matches", std::move(matches)}};
}

BundleService::BundleService(MapBundle bundle) : bundle_(std::move(bundle)) {
  const json doc = to_json(bundle_);
  if (auto problems = validate_bundle(doc); !problems.empty()) {
    std::string msg = "bundle failed validation:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw BundleError(msg);
  }
  bundle_text_ = doc.dump();

  for (std::size_t i = 0; i < bundle_.points.size(); ++i) {
    const auto& p = bundle_.points[i];
    if (p.kind == MapPointKind::paper) continue;
    EntityRef ref{p.kind == MapPointKind::author ? EntityKind::author : EntityKind::venue, p.label};
    entities_[ref].point = i;
  }
  for (std::size_t i = 0; i < bundle_.trajectories.size(); ++i)
    entities_[bundle_.trajectories[i].entity].trajectory = i;
  for (std::size_t i = 0; i < bundle_.entity_streams.size(); ++i)
    entities_[bundle_.entity_streams[i].entity].stream = i;

  for (std::size_t i = 0; i < bundle_.points.size(); ++i) {
    const auto& p = bundle_.points[i];
    if (p.kind != MapPointKind::paper) continue;
    for (const auto& author : p.authors)
      if (auto it = entities_.find({EntityKind::author, author}); it != entities_.end())
        it->second.papers.push_back(i);
    if (auto it = entities_.find({EntityKind::venue, p.venue}); it != entities_.end())
      it->second.papers.push_back(i);
  }
}

BundleService BundleService::from_file(const std::string& path) { return BundleService(load_bundle(path)); }

EntityQueryResult BundleService::search(std::string_view query, std::size_t limit) const {
  const std::string needle = to_lower_ascii(query);
  struct Ranked {
    bool prefix;
    const EntityRef* ref;
    std::size_t count;
  };
  std::vector<Ranked> hits;
  for (const auto& [ref, entry] : entities_) {
    const std::string name = to_lower_ascii(ref.name);
    const auto at = name.find(needle);
    if (at == std::string::npos) continue;
    hits.push_back({at == 0, &ref, bundle_.points[entry.point].paper_count});
  }
  std::sort(hits.begin(), hits.end(), [](const Ranked& a, const Ranked& b) {
    if (a.prefix != b.prefix) return a.prefix;
    if (a.count != b.count) return a.count > b.count;
    if (a.ref->name != b.ref->name) return a.ref->name < b.ref->name;
    return a.ref->kind < b.ref->kind;
  });
  EntityQueryResult result;
  result.query = std::string(query);
  for (std::size_t i = 0; i < hits.size() && i < limit; ++i)
    result.matches.push_back({hits[i].ref->kind, hits[i].ref->name, hits[i].count});
  return result;
}

std::vector<std::string> BundleService::suggestions(EntityKind kind, std::string_view name) const {
  const std::string query = to_lower_ascii(name);
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& [ref, _] : entities_) {
    if (ref.kind != kind) continue;
    const std::string lower = to_lower_ascii(ref.name);
    const auto [q, c] = std::mismatch(query.begin(), query.end(), lower.begin(), lower.end());
    std::size_t score = static_cast<std::size_t>(q - query.begin());
    if (score == 0 && !query.empty() && lower.find(query) != std::string::npos) score = 1;
    if (score > 0) scored.emplace_back(score, ref.name);
  }
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < 5; ++i) out.push_back(scored[i].second);
  return out;
}

const BundleService::EntityEntry& BundleService::lookup(EntityKind kind, std::string_view name) const {
  auto it = entities_.find(EntityRef{kind, std::string(name)});
  if (it == entities_.end())
    throw LookupError("unknown " + std::string(to_string(kind)) + " '" + std::string(name) + "'",
                      suggestions(kind, name));
  return it->second;
}

json BundleService::entity_detail(EntityKind kind, std::string_view name) const {
  const auto& entry = lookup(kind, name);
  const auto& point = bundle_.points[entry.point];

  json papers = json::array();
  for (auto i : entry.papers) papers.push_back(to_json(bundle_.points[i]));
  json trajectory = json::array();
  if (entry.trajectory) trajectory = to_json(bundle_.trajectories[*entry.trajectory])["points"];
  const StreamSeries empty{{}, std::vector<std::vector<double>>(bundle_.topics.size())};
  const json stream = to_json(entry.stream ? bundle_.entity_streams[*entry.stream].series : empty);

  return {{"kind", to_string(kind)},
          {"name", point.label},
          {"paper_count", point.paper_count},
          {"point", to_json(point)},
          {"trajectory", std::move(trajectory)},
          {"stream", stream},
          {"papers", std::move(papers)}};
}

namespace {

HttpResponse not_found(const LookupError& e) {
  return json_response(404, {{"error", e.what()}, {"suggestions", e.suggestions()}});
}

HttpResponse bad_request(const std::string& what) {
  return json_response(400, {{"error", what}, {"suggestions", json::array()}});
}

}  // namespace

HttpResponse BundleService::get_bundle() const {
  HttpResponse response;
  response.body = bundle_text_;
  response.etag = strong_etag(response.body);
  return response;
}

HttpResponse BundleService::get_entities(std::string_view query, std::optional<std::string_view> limit_text) const {
  std::size_t limit = kDefaultSearchLimit;
  if (limit_text && !limit_text->empty()) {
    const auto* first = limit_text->data();
    const auto* last = first + limit_text->size();
    auto [ptr, ec] = std::from_chars(first, last, limit);
    if (ec != std::errc{} || ptr != last) return bad_request("limit must be a non-negative integer");
  }
  return json_response(200, to_json(search(query, std::min(limit, kMaxSearchLimit))));
}

HttpResponse BundleService::get_trajectory(std::string_view kind_text, std::string_view name) const {
  EntityKind kind;
  try {
    kind = parse_entity_kind(kind_text);
  } catch (const std::invalid_argument& e) {
    return bad_request(e.what());
  }
  try {
    return json_response(200, entity_detail(kind, name));
  } catch (const LookupError& e) {
    return not_found(e);
  }
}

HttpResponse BundleService::get_stream(std::optional<std::string_view> kind_text,
                                       std::optional<std::string_view> name) const {
  if (!kind_text && !name) return json_response(200, to_json(bundle_.global_stream));
  if (!kind_text || !name) return bad_request("give both kind and name, or neither");
  EntityKind kind;
  try {
    kind = parse_entity_kind(*kind_text);
  } catch (const std::invalid_argument& e) {
    return bad_request(e.what());
  }
  try {
    const auto& entry = lookup(kind, *name);
    if (!entry.stream) return json_response(200, to_json(StreamSeries{{}, std::vector<std::vector<double>>(bundle_.topics.size())}));
    return json_response(200, to_json(bundle_.entity_streams[*entry.stream].series));
  } catch (const LookupError& e) {
    return not_found(e);
  }
}

// --- response validation ----------------------------------------------------

std::vector<std::string> validate_entity_query(const json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) return {"entities: expected an object"};
  if (!doc.contains("query") || !doc["query"].is_string()) problems.push_back("entities.query: expected a string");
  if (!doc.contains("matches") || !doc["matches"].is_array()) {
    problems.push_back("entities.matches: expected an array");
    return problems;
  }
  for (const auto& m : doc["matches"]) {
    if (!m.is_object() || !m.contains("kind") || !m.contains("name") || !m.contains("paper_count") ||
        !m["name"].is_string() || !m["paper_count"].is_number_unsigned() ||
        (m["kind"] != "author" && m["kind"] != "venue"))
      problems.push_back("entities.matches: malformed match");
  }
  return problems;
}

std::vector<std::string> validate_entity_detail(const json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) return {"detail: expected an object"};
  for (const char* key : {"kind", "name"})
    if (!doc.contains(key) || !doc[key].is_string()) problems.push_back(std::string("detail.") + key + ": expected a string");
  if (!doc.contains("paper_count") || !doc["paper_count"].is_number_unsigned())
    problems.push_back("detail.paper_count: expected a count");
  if (!doc.contains("point") || !doc["point"].is_object()) problems.push_back("detail.point: expected an object");
  if (!doc.contains("papers") || !doc["papers"].is_array()) {
    problems.push_back("detail.papers: expected an array");
  } else {
    for (const auto& p : doc["papers"])
      if (!p.is_object() || p.value("kind", "") != "paper") problems.push_back("detail.papers: non-paper entry");
  }
  if (!doc.contains("trajectory") || !doc["trajectory"].is_array()) {
    problems.push_back("detail.trajectory: expected an array");
  } else {
    const auto& points = doc["trajectory"];
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      if (!p.is_object() || !p.contains("year") || !p["year"].is_number_integer() || !p.contains("x") ||
          !p.contains("y") || !p["x"].is_number() || !p["y"].is_number()) {
        problems.push_back("detail.trajectory: malformed point");
        continue;
      }
      if (i > 0 && points[i - 1].is_object() && points[i - 1].contains("year") &&
          points[i - 1]["year"].is_number_integer() && p["year"].get<int>() <= points[i - 1]["year"].get<int>())
        problems.push_back("detail.trajectory: years not ascending");
    }
  }
  if (!doc.contains("stream")) {
    problems.push_back("detail.stream: missing");
  } else {
    auto more = validate_stream(doc["stream"], "detail.stream");
    problems.insert(problems.end(), more.begin(), more.end());
  }
  return problems;
}

std::vector<std::string> validate_error(const json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object() || !doc.contains("error") || !doc["error"].is_string())
    problems.push_back("error.error: expected a string");
  if (!doc.is_object() || !doc.contains("suggestions") || !doc["suggestions"].is_array())
    problems.push_back("error.suggestions: expected an array");
  return problems;
}

// --- HTTP -------------------------------------------------------------------

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

void reply(const httplib::Request& req, httplib::Response& res, const HttpResponse& out) {
  res.set_header("ETag", out.etag);
  res.set_header("Cache-Control", "no-cache");
  if (out.status == 200 && req.get_header_value("If-None-Match") == out.etag) {
    res.status = 304;
    return;
  }
  res.status = out.status;
  res.set_content(out.body, out.content_type);
}

std::optional<std::string_view> param(const httplib::Request& req, const char* key) {
  auto it = req.params.find(key);
  if (it == req.params.end()) return std::nullopt;
  return std::string_view(it->second);
}

}  // namespace

HttpServer::HttpServer(const BundleService& service, std::string static_dir)
    : impl_(std::make_unique<Impl>()) {
  auto& svr = impl_->server;
  const BundleService* s = &service;

  svr.Get("/api/bundle", [s](const httplib::Request& req, httplib::Response& res) {
    reply(req, res, s->get_bundle());
  });
  svr.Get("/api/entities", [s](const httplib::Request& req, httplib::Response& res) {
    reply(req, res, s->get_entities(param(req, "q").value_or(""), param(req, "limit")));
  });
  svr.Get(R"(/api/trajectory/([^/]+)/(.+))", [s](const httplib::Request& req, httplib::Response& res) {
    reply(req, res, s->get_trajectory(req.matches[1].str(), req.matches[2].str()));
  });
  svr.Get("/api/stream", [s](const httplib::Request& req, httplib::Response& res) {
    reply(req, res, s->get_stream(param(req, "kind"), param(req, "name")));
  });

  if (!static_dir.empty()) {
    if (!std::filesystem::is_directory(static_dir))
      throw Error("static directory '" + static_dir + "' does not exist");
    svr.set_mount_point("/", static_dir);
  }
}

HttpServer::~HttpServer() = default;

int HttpServer::bind_to_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpServer::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }
bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::pair<std::string, int> parse_listen_address(std::string_view address) {
  const auto colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0) throw std::invalid_argument("expected host:port");
  int port = 0;
  const auto digits = address.substr(colon + 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || port < 0 || port > 65535)
    throw std::invalid_argument("invalid port in '" + std::string(address) + "'");
  return {std::string(address.substr(0, colon)), port};
}

}  // namespace atlas
