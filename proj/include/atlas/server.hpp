#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "atlas/mapbundle.hpp"

namespace atlas {

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  /// Strong validator over the body bytes.
  std::string etag;
};

struct EntityMatch {
  EntityKind kind = EntityKind::author;
  std::string name;
  std::size_t paper_count = 0;
};

struct EntityQueryResult {
  std::string query;
  std::vector<EntityMatch> matches;
};

/// Read-only view over one bundle. All methods are const and safe to call from
/// any number of threads.
class BundleService {
public:
  /// Throws BundleError with schema diagnostics when the bundle is invalid.
  explicit BundleService(MapBundle bundle);
  static BundleService from_file(const std::string& path);

  const MapBundle& bundle() const noexcept { return bundle_; }

  /// Case-insensitive substring search; prefix matches first, then paper
  /// count descending, then name.
  EntityQueryResult search(std::string_view query, std::size_t limit) const;

  /// Trajectory, per-entity stream and every paper of the entity regardless of
  /// sample flags. Throws LookupError when unknown.
  nlohmann::json entity_detail(EntityKind kind, std::string_view name) const;

  HttpResponse get_bundle() const;
  HttpResponse get_entities(std::string_view query, std::optional<std::string_view> limit) const;
  HttpResponse get_trajectory(std::string_view kind, std::string_view name) const;
  /// Global stream when both kind and name are absent.
  HttpResponse get_stream(std::optional<std::string_view> kind, std::optional<std::string_view> name) const;

private:
  struct EntityEntry {
    std::size_t point = 0;                    // index into bundle_.points
    std::optional<std::size_t> trajectory;    // index into bundle_.trajectories
    std::optional<std::size_t> stream;        // index into bundle_.entity_streams
    std::vector<std::size_t> papers;          // indices into bundle_.points
  };

  const EntityEntry& lookup(EntityKind kind, std::string_view name) const;
  std::vector<std::string> suggestions(EntityKind kind, std::string_view name) const;

  MapBundle bundle_;
  std::string bundle_text_;
  std::map<EntityRef, EntityEntry> entities_;
};

inline constexpr std::size_t kDefaultSearchLimit = 10;
inline constexpr std::size_t kMaxSearchLimit = 100;

HttpResponse json_response(int status, const nlohmann::json& body);
std::string strong_etag(std::string_view body);

nlohmann::json to_json(const EntityQueryResult& result);

/// Response-shape diagnostics; empty when valid.
std::vector<std::string> validate_entity_query(const nlohmann::json& doc);
std::vector<std::string> validate_entity_detail(const nlohmann::json& doc);
std::vector<std::string> validate_error(const nlohmann::json& doc);

/// HTTP front end: /api/bundle, /api/entities, /api/trajectory/{kind}/{name},
/// /api/stream, and static files from `static_dir` under /.
class HttpServer {
public:
  HttpServer(const BundleService& service, std::string static_dir);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds an ephemeral port and returns it (or -1).
  int bind_to_any_port(const std::string& host);
  bool bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Splits "host:port"; throws std::invalid_argument.
std::pair<std::string, int> parse_listen_address(std::string_view address);

}  // namespace atlas
