#include "atlas/mapbundle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "atlas/error.hpp"

namespace atlas {

using nlohmann::json;

const std::array<const char*, 24>& topic_palette() {
  static const std::array<const char*, 24> colors{
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
      "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
      "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5", "#393b79", "#637939", "#8c6d31", "#843c39"};
  return colors;
}

std::string_view to_string(MapPointKind kind) {
  switch (kind) {
    case MapPointKind::paper: return "paper";
    case MapPointKind::author: return "author";
    case MapPointKind::venue: return "venue";
  }
  return "paper";
}

MapPointKind parse_map_point_kind(std::string_view text) {
  if (text == "paper") return MapPointKind::paper;
  if (text == "author") return MapPointKind::author;
  if (text == "venue") return MapPointKind::venue;
  throw BundleError("unknown point kind '" + std::string(text) + "'");
}

bool operator==(const MapBundle& a, const MapBundle& b) {
  return a.schema_version == b.schema_version && a.topics == b.topics && a.points == b.points &&
         a.trajectories == b.trajectories && a.global_stream == b.global_stream &&
         a.entity_streams == b.entity_streams && a.year_range == b.year_range &&
         a.options.sample_rate == b.options.sample_rate &&
         a.options.reduced_sample_factor == b.options.reduced_sample_factor &&
         a.options.sample_seed == b.options.sample_seed && a.options.pipeline == b.options.pipeline;
}

double round_coordinate(double value) { return std::round(value * 1e6) / 1e6; }

namespace {

std::vector<std::size_t> seeded_permutation(std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = count; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  return order;
}

std::size_t rounded_size(double rate, std::size_t count) {
  return std::min(count, static_cast<std::size_t>(std::llround(rate * static_cast<double>(count))));
}

}  // namespace

PaperSample draw_sample(std::size_t count, double rate, double reduced_factor, std::uint64_t seed) {
  if (!(rate > 0.0 && rate <= 1.0)) throw BundleError("sample rate must lie in (0, 1]");
  if (!(reduced_factor > 0.0 && reduced_factor <= 1.0))
    throw BundleError("reduced sample factor must lie in (0, 1]");
  PaperSample sample{std::vector<bool>(count, false), std::vector<bool>(count, false)};
  const auto order = seeded_permutation(count, seed);
  const std::size_t k = rounded_size(rate, count);
  const std::size_t reduced = rounded_size(reduced_factor, k);
  for (std::size_t i = 0; i < k; ++i) {
    sample.sampled[order[i]] = true;
    if (i < reduced) sample.reduced[order[i]] = true;
  }
  return sample;
}

std::vector<std::size_t> sample_papers(std::size_t count, double rate, std::uint64_t seed) {
  const auto sample = draw_sample(count, rate, 1.0, seed);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < count; ++i)
    if (sample.sampled[i]) out.push_back(i);
  return out;
}

StreamSeries stream_series(const std::vector<std::pair<int, int>>& papers, int topics) {
  std::map<int, std::vector<std::size_t>> counts;
  for (const auto& [year, topic] : papers) {
    if (topic < 0 || topic >= topics) continue;
    auto& row = counts[year];
    row.resize(static_cast<std::size_t>(topics), 0);
    ++row[static_cast<std::size_t>(topic)];
  }
  StreamSeries series;
  series.shares.assign(static_cast<std::size_t>(topics), {});
  for (const auto& [year, row] : counts) {
    const double total = static_cast<double>(std::accumulate(row.begin(), row.end(), std::size_t{0}));
    series.years.push_back(year);
    for (std::size_t k = 0; k < row.size(); ++k)
      series.shares[k].push_back(static_cast<double>(row[k]) / total);
  }
  return series;
}

MapBundle assemble_bundle(const PublicationCorpus& corpus, const Eigen::MatrixXd& H,
                          const std::vector<TopicSummary>& topics,
                          const std::vector<Trajectory>& trajectories, const Embedding2D& embedding,
                          const BundleOptions& options) {
  if (static_cast<std::size_t>(H.cols()) != corpus.size())
    throw BundleError("topic matrix columns do not match the corpus size");
  const int t = static_cast<int>(H.rows());
  if (static_cast<int>(topics.size()) != t) throw BundleError("topic summaries do not match H");

  MapBundle bundle;
  bundle.options = options;
  bundle.year_range = corpus.year_range();

  auto label_of = [&](int topic) {
    return topic == kUnassignedTopic ? std::string(kUnassignedLabel)
                                     : topics[static_cast<std::size_t>(topic)].label;
  };

  const auto sample = draw_sample(corpus.size(), options.sample_rate, options.reduced_sample_factor,
                                  options.sample_seed);
  std::vector<int> paper_topic(corpus.size());
  std::vector<double> sum_x(static_cast<std::size_t>(t), 0.0), sum_y(static_cast<std::size_t>(t), 0.0);
  std::vector<std::size_t> sizes(static_cast<std::size_t>(t), 0);
  std::vector<std::pair<int, int>> global;
  global.reserve(corpus.size());

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& record = corpus[i];
    const auto& xy = embedding.at(paper_point_id(record.paper_id));
    MapPoint point;
    point.id = paper_point_id(record.paper_id);
    point.kind = MapPointKind::paper;
    point.x = round_coordinate(xy.x);
    point.y = round_coordinate(xy.y);
    point.main_topic = main_topic(H.col(static_cast<Eigen::Index>(i)));
    point.topic_label = label_of(point.main_topic);
    point.year = record.year;
    point.label = record.title;
    point.venue = record.venue;
    point.authors = record.authors;
    point.sampled = sample.sampled[i];
    point.reduced = sample.reduced[i];
    paper_topic[i] = point.main_topic;
    global.emplace_back(record.year, point.main_topic);
    if (point.main_topic != kUnassignedTopic) {
      const auto k = static_cast<std::size_t>(point.main_topic);
      sum_x[k] += xy.x;
      sum_y[k] += xy.y;
      ++sizes[k];
    }
    bundle.points.push_back(std::move(point));
  }

  for (int k = 0; k < t; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    BundleTopic topic;
    topic.id = k;
    topic.label = topics[idx].label;
    topic.top_terms = topics[idx].top_terms;
    topic.color = topic_palette()[idx % topic_palette().size()];
    topic.size = sizes[idx];
    if (sizes[idx] > 0)
      topic.landmark = {round_coordinate(sum_x[idx] / static_cast<double>(sizes[idx])),
                        round_coordinate(sum_y[idx] / static_cast<double>(sizes[idx]))};
    bundle.topics.push_back(std::move(topic));
  }
  bundle.global_stream = stream_series(global, t);

  std::vector<const Trajectory*> ordered;
  for (const auto& trajectory : trajectories) ordered.push_back(&trajectory);
  std::sort(ordered.begin(), ordered.end(),
            [](const Trajectory* a, const Trajectory* b) { return a->entity < b->entity; });
  for (std::size_t i = 1; i < ordered.size(); ++i)
    if (ordered[i]->entity == ordered[i - 1]->entity)
      throw BundleError("duplicate trajectory for '" + ordered[i]->entity.name + "'");

  for (const auto* trajectory : ordered) {
    const auto& entity = trajectory->entity;
    const auto& xy = embedding.at(overall_point_id(entity));
    MapPoint point;
    point.id = overall_point_id(entity);
    point.kind = entity.kind == EntityKind::author ? MapPointKind::author : MapPointKind::venue;
    point.x = round_coordinate(xy.x);
    point.y = round_coordinate(xy.y);
    point.main_topic = main_topic(trajectory->overall);
    point.topic_label = label_of(point.main_topic);
    point.label = entity.name;
    if (entity.kind == EntityKind::venue) point.venue = entity.name;
    point.paper_count = trajectory->paper_count;
    bundle.points.push_back(std::move(point));

    BundleTrajectory entry;
    entry.entity = entity;
    for (const auto& p : trajectory->points) {
      const auto& pxy = embedding.at(trajectory_point_id(entity, p.year));
      entry.points.push_back({p.year, round_coordinate(pxy.x), round_coordinate(pxy.y), p.main_topic,
                              p.paper_count});
    }
    bundle.trajectories.push_back(std::move(entry));

    std::vector<std::pair<int, int>> own;
    for (auto pos : entity_papers(corpus, entity)) own.emplace_back(corpus[pos].year, paper_topic[pos]);
    bundle.entity_streams.push_back({entity, stream_series(own, t)});
  }
  return bundle;
}

// --- serialization --------------------------------------------------------

json to_json(const StreamSeries& series) {
  return {{"years", series.years}, {"shares", series.shares}};
}

json to_json(const MapPoint& point) {
  return {{"id", point.id},
          {"kind", to_string(point.kind)},
          {"x", point.x},
          {"y", point.y},
          {"main_topic", point.main_topic},
          {"topic_label", point.topic_label},
          {"year", point.year ? json(*point.year) : json(nullptr)},
          {"label", point.label},
          {"venue", point.venue},
          {"authors", point.authors},
          {"paper_count", point.paper_count},
          {"sampled", point.sampled},
          {"reduced", point.reduced}};
}

json to_json(const BundleTrajectory& trajectory) {
  json points = json::array();
  for (const auto& p : trajectory.points)
    points.push_back({{"year", p.year},
                      {"x", p.x},
                      {"y", p.y},
                      {"main_topic", p.main_topic},
                      {"paper_count", p.paper_count}});
  return {{"kind", to_string(trajectory.entity.kind)},
          {"name", trajectory.entity.name},
          {"points", std::move(points)}};
}

json to_json(const MapBundle& bundle) {
  json topics = json::array();
  for (const auto& topic : bundle.topics) {
    json terms = json::array();
    for (const auto& [term, weight] : topic.top_terms) terms.push_back({{"term", term}, {"weight", weight}});
    topics.push_back({{"id", topic.id},
                      {"label", topic.label},
                      {"top_terms", std::move(terms)},
                      {"color", topic.color},
                      {"landmark", {{"x", topic.landmark.x}, {"y", topic.landmark.y}}},
                      {"size", topic.size}});
  }

  json points = json::array();
  for (const auto& point : bundle.points) points.push_back(to_json(point));

  json trajectories = json::array();
  for (const auto& trajectory : bundle.trajectories) trajectories.push_back(to_json(trajectory));

  json entity_streams = json::array();
  for (const auto& stream : bundle.entity_streams) {
    json s = to_json(stream.series);
    s["kind"] = to_string(stream.entity.kind);
    s["name"] = stream.entity.name;
    entity_streams.push_back(std::move(s));
  }

  json palette = json::array();
  for (const char* c : topic_palette()) palette.push_back(c);

  json config = {
      {"sample_seed", bundle.options.sample_seed},
      {"sample_rate", bundle.options.sample_rate},
      {"reduced_sample_factor", bundle.options.reduced_sample_factor},
      {"year_range", {bundle.year_range.first, bundle.year_range.second}},
      {"markers", {{"paper", "dot"}, {"author", "triangle"}, {"venue", "square"}}},
      {"palette", std::move(palette)},
      {"unassigned", {{"topic", kUnassignedTopic}, {"color", kUnassignedColor}, {"label", kUnassignedLabel}}},
      {"pipeline", bundle.options.pipeline}};

  return {{"schema_version", bundle.schema_version},
          {"topics", std::move(topics)},
          {"points", std::move(points)},
          {"trajectories", std::move(trajectories)},
          {"streams", {{"global", to_json(bundle.global_stream)}, {"entities", std::move(entity_streams)}}},
          {"config", std::move(config)}};
}

namespace {

StreamSeries stream_from_json(const json& doc) {
  StreamSeries series;
  series.years = doc.at("years").get<std::vector<int>>();
  series.shares = doc.at("shares").get<std::vector<std::vector<double>>>();
  return series;
}

}  // namespace

MapBundle bundle_from_json(const json& doc) {
  if (auto problems = validate_bundle(doc); !problems.empty())
    throw BundleError("invalid bundle: " + problems.front() +
                      (problems.size() > 1 ? " (+" + std::to_string(problems.size() - 1) + " more)" : ""));
  MapBundle bundle;
  try {
    bundle.schema_version = doc.at("schema_version").get<int>();
    for (const auto& t : doc.at("topics")) {
      BundleTopic topic;
      topic.id = t.at("id").get<int>();
      topic.label = t.at("label").get<std::string>();
      for (const auto& term : t.at("top_terms"))
        topic.top_terms.emplace_back(term.at("term").get<std::string>(), term.at("weight").get<double>());
      topic.color = t.at("color").get<std::string>();
      topic.landmark = {t.at("landmark").at("x").get<double>(), t.at("landmark").at("y").get<double>()};
      topic.size = t.at("size").get<std::size_t>();
      bundle.topics.push_back(std::move(topic));
    }
    for (const auto& p : doc.at("points")) {
      MapPoint point;
      point.id = p.at("id").get<std::string>();
      point.kind = parse_map_point_kind(p.at("kind").get<std::string>());
      point.x = p.at("x").get<double>();
      point.y = p.at("y").get<double>();
      point.main_topic = p.at("main_topic").get<int>();
      point.topic_label = p.at("topic_label").get<std::string>();
      if (!p.at("year").is_null()) point.year = p.at("year").get<int>();
      point.label = p.at("label").get<std::string>();
      point.venue = p.at("venue").get<std::string>();
      point.authors = p.at("authors").get<std::vector<std::string>>();
      point.paper_count = p.at("paper_count").get<std::size_t>();
      point.sampled = p.at("sampled").get<bool>();
      point.reduced = p.at("reduced").get<bool>();
      bundle.points.push_back(std::move(point));
    }
    for (const auto& t : doc.at("trajectories")) {
      BundleTrajectory trajectory;
      trajectory.entity = {parse_entity_kind(t.at("kind").get<std::string>()), t.at("name").get<std::string>()};
      for (const auto& p : t.at("points"))
        trajectory.points.push_back({p.at("year").get<int>(), p.at("x").get<double>(), p.at("y").get<double>(),
                                     p.at("main_topic").get<int>(), p.at("paper_count").get<std::size_t>()});
      bundle.trajectories.push_back(std::move(trajectory));
    }
    const auto& streams = doc.at("streams");
    bundle.global_stream = stream_from_json(streams.at("global"));
    for (const auto& s : streams.at("entities"))
      bundle.entity_streams.push_back(
          {{parse_entity_kind(s.at("kind").get<std::string>()), s.at("name").get<std::string>()},
           stream_from_json(s)});
    const auto& config = doc.at("config");
    bundle.options.sample_seed = config.at("sample_seed").get<std::uint64_t>();
    bundle.options.sample_rate = config.at("sample_rate").get<double>();
    bundle.options.reduced_sample_factor = config.at("reduced_sample_factor").get<double>();
    bundle.options.pipeline = config.at("pipeline");
    bundle.year_range = {config.at("year_range").at(0).get<int>(), config.at("year_range").at(1).get<int>()};
  } catch (const json::exception& e) {
    throw BundleError(std::string("invalid bundle: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw BundleError(std::string("invalid bundle: ") + e.what());
  }
  return bundle;
}

std::string serialize_bundle(const MapBundle& bundle) { return to_json(bundle).dump() + "\n"; }

void save_bundle(const MapBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BundleError("cannot write bundle '" + path + "'");
  out << serialize_bundle(bundle);
  if (!out) throw BundleError("write failed for bundle '" + path + "'");
}

MapBundle load_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BundleError("cannot read bundle '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw BundleError("bundle '" + path + "' is not JSON: " + e.what());
  }
  return bundle_from_json(doc);
}

}  // namespace atlas
