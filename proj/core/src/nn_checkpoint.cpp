#include "sigstate/nn/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace sigstate::nn {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'S', 'G', 'S', 'T', 'C', 'K', 'P', 'T'};
constexpr int kFormatVersion = 1;

json config_to_json(const ArchitectureConfig& c) {
  json j;
  j["variant"] = to_string(c.variant);
  j["conv_layers"] = json::array();
  for (const auto& layer : c.conv_layers)
    j["conv_layers"].push_back({layer.filters, layer.kernel});
  j["gru_layers"] = c.gru_layers;
  j["dense_hidden"] = c.dense_hidden;
  j["leaky_slope"] = c.leaky_slope;
  j["num_states"] = c.num_states;
  j["input_channels"] = c.input_channels;
  j["max_length"] = c.max_length;
  return j;
}

ArchitectureConfig config_from_json(const json& j) {
  ArchitectureConfig c;
  c.variant = variant_from_string(j.at("variant").get<std::string>());
  c.conv_layers.clear();
  for (const auto& layer : j.at("conv_layers"))
    c.conv_layers.push_back({layer.at(0).get<Index>(), layer.at(1).get<Index>()});
  c.gru_layers = j.at("gru_layers").get<std::vector<Index>>();
  c.dense_hidden = j.at("dense_hidden").get<Index>();
  c.leaky_slope = j.at("leaky_slope").get<double>();
  c.num_states = j.at("num_states").get<int>();
  c.input_channels = j.at("input_channels").get<Index>();
  c.max_length = j.at("max_length").get<Index>();
  return c;
}

}  // namespace

ModelCheckpoint checkpoint_from_network(const Network& network,
                                        ChannelNormalizer normalizer,
                                        TrainingMeta meta) {
  ModelCheckpoint ckpt;
  ckpt.config = network.config();
  ckpt.normalizer = std::move(normalizer);
  ckpt.meta = meta;
  for (const auto* p : network.parameters())
    ckpt.tensors.emplace_back(p->name, p->value);
  return ckpt;
}

Network network_from_checkpoint(const ModelCheckpoint& checkpoint) {
  Network net(checkpoint.config);
  auto params = net.parameters();
  if (params.size() != checkpoint.tensors.size())
    throw ShapeError("checkpoint has " + std::to_string(checkpoint.tensors.size()) +
                     " tensors, config expects " + std::to_string(params.size()));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& [name, value] = checkpoint.tensors[i];
    if (params[i]->name != name)
      throw ShapeError("checkpoint tensor '" + name + "' does not match expected '" +
                       params[i]->name + "'");
    if (params[i]->value.rows() != value.rows() ||
        params[i]->value.cols() != value.cols())
      throw ShapeError("checkpoint tensor '" + name + "' has shape " +
                       std::to_string(value.rows()) + "x" +
                       std::to_string(value.cols()) + ", expected " +
                       std::to_string(params[i]->value.rows()) + "x" +
                       std::to_string(params[i]->value.cols()));
    params[i]->value = value;
  }
  return net;
}

void save_checkpoint(const ModelCheckpoint& checkpoint,
                     const std::filesystem::path& path) {
  json header;
  header["format_version"] = checkpoint.format_version;
  header["config"] = config_to_json(checkpoint.config);
  header["normalizer"] = {
      {"mean", std::vector<double>(checkpoint.normalizer.mean.data(),
                                   checkpoint.normalizer.mean.data() +
                                       checkpoint.normalizer.mean.size())},
      {"stdev", std::vector<double>(checkpoint.normalizer.stdev.data(),
                                    checkpoint.normalizer.stdev.data() +
                                        checkpoint.normalizer.stdev.size())}};
  header["metadata"] = {{"epochs_run", checkpoint.meta.epochs_run},
                        {"best_epoch", checkpoint.meta.best_epoch},
                        {"best_val_accuracy", checkpoint.meta.best_val_accuracy},
                        {"final_train_loss", checkpoint.meta.final_train_loss},
                        {"seed", checkpoint.meta.seed}};
  header["tensors"] = json::array();
  for (const auto& [name, value] : checkpoint.tensors)
    header["tensors"].push_back(
        {{"name", name}, {"rows", value.rows()}, {"cols", value.cols()}});

  std::string header_str = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  std::uint64_t header_len = header_str.size();
  out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
  std::vector<double> row;
  for (const auto& [name, value] : checkpoint.tensors) {
    for (Index i = 0; i < value.rows(); ++i) {
      row.assign(static_cast<std::size_t>(value.cols()), 0.0);
      for (Index j = 0; j < value.cols(); ++j)
        row[static_cast<std::size_t>(j)] = value(i, j);
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
  }
  if (!out) throw IoError("failed writing checkpoint: " + path.string());
}

ModelCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw CorruptFileError("not a checkpoint file: " + path.string());
  std::uint64_t header_len = 0;
  in.read(reinterpret_cast<char*>(&header_len), sizeof(header_len));
  if (in.gcount() != sizeof(header_len) || header_len > (1ull << 30))
    throw CorruptFileError("checkpoint header damaged: " + path.string());
  std::string header_str(header_len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(header_len));
  if (static_cast<std::uint64_t>(in.gcount()) != header_len)
    throw CorruptFileError("checkpoint truncated in header: " + path.string());

  json header;
  try {
    header = json::parse(header_str);
  } catch (const json::exception& e) {
    throw CorruptFileError("checkpoint header is not valid JSON: " +
                           std::string(e.what()));
  }

  ModelCheckpoint ckpt;
  ckpt.format_version = header.value("format_version", -1);
  if (ckpt.format_version != kFormatVersion)
    throw VersionMismatchError("checkpoint format version " +
                               std::to_string(ckpt.format_version) +
                               " not supported (expected " +
                               std::to_string(kFormatVersion) + ")");
  try {
    ckpt.config = config_from_json(header.at("config"));
    auto mean = header.at("normalizer").at("mean").get<std::vector<double>>();
    auto stdev = header.at("normalizer").at("stdev").get<std::vector<double>>();
    ckpt.normalizer.mean =
        Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Index>(mean.size()));
    ckpt.normalizer.stdev = Eigen::Map<const Eigen::VectorXd>(
        stdev.data(), static_cast<Index>(stdev.size()));
    const auto& md = header.at("metadata");
    ckpt.meta.epochs_run = md.value("epochs_run", 0);
    ckpt.meta.best_epoch = md.value("best_epoch", 0);
    ckpt.meta.best_val_accuracy = md.value("best_val_accuracy", 0.0);
    ckpt.meta.final_train_loss = md.value("final_train_loss", 0.0);
    ckpt.meta.seed = md.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw CorruptFileError("checkpoint header incomplete: " + std::string(e.what()));
  }

  for (const auto& t : header.at("tensors")) {
    std::string name = t.at("name").get<std::string>();
    Index rows = t.at("rows").get<Index>();
    Index cols = t.at("cols").get<Index>();
    if (rows < 0 || cols < 0)
      throw CorruptFileError("checkpoint tensor '" + name + "' has negative shape");
    Eigen::MatrixXd value(rows, cols);
    std::vector<double> row(static_cast<std::size_t>(cols));
    for (Index i = 0; i < rows; ++i) {
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
      if (static_cast<std::size_t>(in.gcount()) != row.size() * sizeof(double))
        throw CorruptFileError("checkpoint truncated in tensor '" + name + "'");
      for (Index j = 0; j < cols; ++j) value(i, j) = row[static_cast<std::size_t>(j)];
    }
    ckpt.tensors.emplace_back(std::move(name), std::move(value));
  }
  // There must be nothing after the declared tensors.
  char extra;
  in.read(&extra, 1);
  if (in.gcount() != 0)
    throw CorruptFileError("checkpoint has trailing bytes: " + path.string());

  // Validate tensor names and shapes against the config.
  network_from_checkpoint(ckpt);
  return ckpt;
}

Predictor::Predictor(const ModelCheckpoint& checkpoint)
    : network_(network_from_checkpoint(checkpoint)),
      normalizer_(checkpoint.normalizer) {}

Prediction Predictor::predict(const MultivariateSeries& series) {
  const auto& cfg = network_.config();
  if (series.num_channels() != cfg.input_channels)
    throw ShapeError("predict: series has " + std::to_string(series.num_channels()) +
                     " channels, model expects " + std::to_string(cfg.input_channels));
  MultivariateSeries normalized = apply_normalizer(normalizer_, series);
  Prediction out;
  out.probabilities = network_.forward(normalized.values);
  out.labels.states = argmax_decode(out.probabilities);
  return out;
}

Prediction predict(const ModelCheckpoint& checkpoint, const MultivariateSeries& series) {
  Predictor predictor(checkpoint);
  return predictor.predict(series);
}

}  // namespace sigstate::nn
