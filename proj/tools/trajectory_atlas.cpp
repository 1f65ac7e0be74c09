// trajectory-atlas: build a topic map bundle from a publication corpus, or serve one.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "atlas/embed.hpp"
#include "atlas/error.hpp"
#include "atlas/pipeline.hpp"
#include "atlas/server.hpp"

namespace fs = std::filesystem;
using namespace atlas;

namespace {

struct BuildArgs {
  std::string corpus, out, stopwords, labels, export_coords, save_model, heatmap_dir;
  std::string train_subset = "all";
  std::string select_topics, selection_report;
  bool select_requested = false;
  std::vector<std::string> heatmaps;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int value = std::stoi(item, &used);
    if (used != item.size()) throw std::invalid_argument("not an integer: '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw std::invalid_argument("empty topic list");
  return out;
}

std::string file_safe(std::string name) {
  for (auto& c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  return name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

void report_selection(const TopicCountSelection& sel, const std::string& path) {
  std::cout << "topics  mean_cv\n";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : sel.candidates) {
    if (c.ok)
      std::cout << std::setw(6) << c.topics << "  " << std::fixed << std::setprecision(6) << c.mean_coherence << "\n";
    else
      std::cout << std::setw(6) << c.topics << "  failed: " << c.error << "\n";
    nlohmann::json row = {{"topics", c.topics}, {"ok", c.ok}};
    if (c.ok) row["mean_coherence"] = c.mean_coherence;
    else row["error"] = c.error;
    rows.push_back(row);
  }
  std::cout << "best: " << sel.best_topics << "\n";
  write_text(path, nlohmann::json{{"best_topics", sel.best_topics}, {"best_score", sel.best_score},
                                  {"candidates", rows}}.dump(2) + "\n");
}

int build(const BuildArgs& args, PipelineConfig config) {
  LoadReport load;
  const auto corpus = load_corpus(args.corpus, {}, &load);
  std::cerr << "corpus: " << load.accepted << " papers, " << load.skipped << " skipped\n";
  for (const auto& reason : load.skip_reasons) std::cerr << "  skipped " << reason << "\n";

  StopWords stopwords = args.stopwords.empty() ? default_stopwords() : load_stopwords(args.stopwords);
  if (!args.labels.empty()) config.labels = load_label_overrides(args.labels);
  config.train_subset = parse_train_subset(args.train_subset);
  if (args.select_requested)
    config.topic_candidates = args.select_topics.empty() ? kDefaultTopicGrid : parse_int_list(args.select_topics);
  config.bundle.sample_seed = config.nmf.seed;

  // Validate heatmap requests before the expensive part.
  std::vector<EntityRef> heatmaps;
  for (const auto& spec : args.heatmaps) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("--export-heatmap expects kind:name, got '" + spec + "'");
    EntityRef ref{parse_entity_kind(spec.substr(0, colon)), spec.substr(colon + 1)};
    entity_papers(corpus, ref);
    heatmaps.push_back(ref);
  }

  const auto result = run_pipeline(corpus, config, &stopwords);

  if (result.selection) {
    const auto path = args.selection_report.empty() ? args.out + ".topics.json" : args.selection_report;
    report_selection(*result.selection, path);
  }
  save_bundle(result.bundle, args.out);
  std::cerr << "bundle: " << args.out << " (" << result.bundle.points.size() << " points, "
            << result.model.topics << " topics)\n";

  if (!args.save_model.empty()) save_model(result.model, args.save_model);
  if (!args.export_coords.empty()) write_coords_csv(result.embedding, args.export_coords);

  if (!heatmaps.empty()) {
    std::vector<std::string> labels;
    for (const auto& s : result.summaries) labels.push_back(s.label);
    const fs::path dir = args.heatmap_dir.empty() ? fs::path(args.out).parent_path() : fs::path(args.heatmap_dir);
    for (const auto& ref : heatmaps) {
      const auto it = std::find_if(result.trajectories.begin(), result.trajectories.end(),
                                   [&](const Trajectory& t) { return t.entity == ref; });
      const auto path = dir / ("heatmap_" + std::string(to_string(ref.kind)) + "_" + file_safe(ref.name) + ".csv");
      write_text(path, heatmap_csv(heatmap_export(*it, labels)));
      std::cerr << "heatmap: " << path.string() << "\n";
    }
  }
  return 0;
}

HttpServer* g_server = nullptr;

int serve(const std::string& bundle_path, const std::string& static_dir, const std::string& listen) {
  const auto [host, port] = parse_listen_address(listen);
  const auto service = BundleService::from_file(bundle_path);
  HttpServer server(service, static_dir);
  if (!server.bind(host, port)) throw Error("cannot bind " + listen);
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  std::cerr << "serving " << bundle_path << " on http://" << listen << "\n";
  server.listen_after_bind();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic-space trajectory maps of publication corpora"};
  app.require_subcommand(1);

  BuildArgs b;
  PipelineConfig config;
  auto* build_cmd = app.add_subcommand("build", "Run the full pipeline and write a map bundle");
  build_cmd->add_option("--corpus", b.corpus, "JSON-lines corpus")->required()->check(CLI::ExistingFile);
  build_cmd->add_option("--out", b.out, "Bundle output path")->required();
  build_cmd->add_option("--stopwords", b.stopwords, "Stop-word file, one term per line")->check(CLI::ExistingFile);
  build_cmd->add_option("--min-df", config.vocabulary.min_df, "Minimum document frequency")->capture_default_str();
  build_cmd->add_option("--max-df-ratio", config.vocabulary.max_df_ratio, "Maximum document frequency ratio")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  build_cmd->add_option("--topics", config.nmf.topics, "Topic count")->check(CLI::PositiveNumber)->capture_default_str();
  build_cmd->add_option("--seed", config.nmf.seed, "Seed for NMF, t-SNE and sampling")->capture_default_str();
  build_cmd->add_option("--max-iter", config.nmf.max_iter, "NMF iteration cap")->capture_default_str();
  build_cmd->add_option("--tol", config.nmf.tol, "NMF relative objective tolerance")->capture_default_str();
  build_cmd->add_option("--labels", b.labels, "JSON topic label overrides")->check(CLI::ExistingFile);
  build_cmd->add_option("--train-subset", b.train_subset, "Documents the model is fit on")
      ->check(CLI::IsMember({"all", "venue"}))->capture_default_str();
  build_cmd->add_option("--train-venues", config.train_venues, "Venues in the venue training subset")->capture_default_str();
  auto* select = build_cmd->add_option("--select-topics", b.select_topics,
                                       "Candidate topic counts, e.g. 5,10,15 (bare: 5,10,...,40)")
                     ->expected(0, 1);
  build_cmd->add_option("--selection-report", b.selection_report, "Topic selection JSON (default <out>.topics.json)");
  build_cmd->add_option("--perplexity", config.tsne.perplexity, "t-SNE perplexity")->capture_default_str();
  build_cmd->add_option("--tsne-iters", config.tsne.iterations, "t-SNE iterations")->capture_default_str();
  build_cmd->add_option("--theta", config.tsne.theta, "Barnes-Hut opening angle")->capture_default_str();
  build_cmd->add_option("--sample-rate", config.bundle.sample_rate, "Displayed paper fraction")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  build_cmd->add_option("--reduced-factor", config.bundle.reduced_sample_factor, "Reduced sample fraction of the sample")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  build_cmd->add_option("--export-coords", b.export_coords, "Write point_id,x,y CSV");
  build_cmd->add_option("--export-heatmap", b.heatmaps, "Heatmap CSV for kind:name (repeatable)");
  build_cmd->add_option("--heatmap-dir", b.heatmap_dir, "Heatmap output directory");
  build_cmd->add_option("--save-model", b.save_model, "Model file prefix");

  std::string bundle_path, static_dir, listen = "127.0.0.1:8080";
  auto* serve_cmd = app.add_subcommand("serve", "Serve a bundle over HTTP");
  serve_cmd->add_option("--bundle", bundle_path, "Bundle path")->required()->check(CLI::ExistingFile);
  serve_cmd->add_option("--static", static_dir, "UI asset directory")->check(CLI::ExistingDirectory);
  serve_cmd->add_option("--listen", listen, "host:port")->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  b.select_requested = select->count() > 0;

  try {
    if (*build_cmd) return build(b, config);
    return serve(bundle_path, static_dir, listen);
  } catch (const LookupError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
