#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "atlas/error.hpp"
#include "atlas/nmf.hpp"

namespace atlas {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "matrix container assumes a little-endian host");

namespace {

constexpr std::array<char, 4> kMagic{'A', 'T', 'L', 'M'};
constexpr std::uint32_t kVersion = 1;

fs::path with_suffix(const fs::path& prefix, const char* suffix) {
  return fs::path(prefix.string() + suffix);
}

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

}  // namespace

void write_matrix(const Matrix& m, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelError("cannot write '" + path.string() + "'");
  out.write(kMagic.data(), kMagic.size());
  put(out, kVersion);
  put(out, static_cast<std::uint64_t>(m.rows()));
  put(out, static_cast<std::uint64_t>(m.cols()));
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(m.size())));
  if (!out) throw ModelError("write failed for '" + path.string() + "'");
}

Matrix read_matrix(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot read '" + path.string() + "'");
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (magic != kMagic) throw ModelError("'" + path.string() + "' is not a matrix container");
  if (get<std::uint32_t>(in) != kVersion)
    throw ModelError("unsupported matrix container version in '" + path.string() + "'");
  const auto rows = get<std::uint64_t>(in);
  const auto cols = get<std::uint64_t>(in);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * rows * cols));
  if (!in) throw ModelError("truncated matrix container '" + path.string() + "'");
  return m;
}

void save_model(const TopicModel& model, const fs::path& prefix) {
  {
    std::ofstream vocab(with_suffix(prefix, ".vocab.txt"));
    if (!vocab) throw ModelError("cannot write vocabulary next to '" + prefix.string() + "'");
    for (std::size_t i = 0; i < model.vocabulary.size(); ++i)
      vocab << model.vocabulary.terms[i] << '\t' << model.vocabulary.document_frequency[i] << '\n';
  }
  write_matrix(model.W, with_suffix(prefix, ".W.bin"));
  write_matrix(model.H, with_suffix(prefix, ".H.bin"));

  json meta = {{"topics", model.topics},
               {"seed", model.seed},
               {"document_count", model.vocabulary.document_count},
               {"objective_trace", model.objective_trace},
               {"vocabulary", with_suffix(prefix, ".vocab.txt").filename().string()},
               {"W", with_suffix(prefix, ".W.bin").filename().string()},
               {"H", with_suffix(prefix, ".H.bin").filename().string()}};
  std::ofstream out(with_suffix(prefix, ".json"));
  out << meta.dump(2) << '\n';
  if (!out) throw ModelError("cannot write model metadata for '" + prefix.string() + "'");
}

TopicModel load_model(const fs::path& prefix) {
  std::ifstream meta_in(with_suffix(prefix, ".json"));
  if (!meta_in) throw ModelError("cannot read model metadata for '" + prefix.string() + "'");
  json meta;
  try {
    meta = json::parse(meta_in);
  } catch (const json::exception& e) {
    throw ModelError("bad model metadata: " + std::string(e.what()));
  }

  TopicModel model;
  model.topics = meta.at("topics").get<int>();
  model.seed = meta.at("seed").get<std::uint64_t>();
  model.objective_trace = meta.at("objective_trace").get<std::vector<double>>();
  model.vocabulary.document_count = meta.at("document_count").get<std::size_t>();

  const auto dir = prefix.parent_path();
  std::ifstream vocab(dir / meta.at("vocabulary").get<std::string>());
  if (!vocab) throw ModelError("cannot read model vocabulary");
  std::string line;
  while (std::getline(vocab, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ModelError("malformed vocabulary line '" + line + "'");
    model.vocabulary.terms.push_back(line.substr(0, tab));
    model.vocabulary.document_frequency.push_back(std::stoul(line.substr(tab + 1)));
  }
  reindex(model.vocabulary);
  model.W = read_matrix(dir / meta.at("W").get<std::string>());
  model.H = read_matrix(dir / meta.at("H").get<std::string>());
  if (model.W.cols() != model.topics || model.H.rows() != model.topics ||
      static_cast<std::size_t>(model.W.rows()) != model.vocabulary.size())
    throw ModelError("model factor shapes disagree with metadata");
  return model;
}

LabelOverrides load_label_overrides(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot read label file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ModelError("label file '" + path.string() + "': " + e.what());
  }
  if (!doc.is_object()) throw ModelError("label file must hold a JSON object");
  LabelOverrides labels;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string()) throw ModelError("label for topic '" + key + "' is not a string");
    std::size_t used = 0;
    int id = -1;
    try {
      id = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || id < 0) throw ModelError("label key '" + key + "' is not a topic id");
    labels[id] = value.get<std::string>();
  }
  return labels;
}

}  // namespace atlas
