#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sigstate/encoding.hpp"
#include "sigstate/nn/network.hpp"
#include "sigstate/normalizer.hpp"

namespace sigstate::nn {

struct TrainingMeta {
  int epochs_run = 0;
  int best_epoch = 0;
  double best_val_accuracy = 0.0;
  double final_train_loss = 0.0;
  std::uint64_t seed = 0;
};

/// Everything needed to reload and run a trained model: the architecture,
/// all parameter tensors (in network order), the normalization statistics
/// and training metadata.
struct ModelCheckpoint {
  int format_version = 1;
  ArchitectureConfig config;
  ChannelNormalizer normalizer;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> tensors;
  TrainingMeta meta;
};

ModelCheckpoint checkpoint_from_network(const Network& network,
                                        ChannelNormalizer normalizer,
                                        TrainingMeta meta);

/// Builds a network and loads the checkpoint tensors into it. Rejects any
/// name or shape mismatch.
Network network_from_checkpoint(const ModelCheckpoint& checkpoint);

/// Binary container: magic, header length, JSON header (config, normalizer,
/// metadata, tensor directory), then raw little-endian float64 blocks in
/// header order.
void save_checkpoint(const ModelCheckpoint& checkpoint,
                     const std::filesystem::path& path);
ModelCheckpoint load_checkpoint(const std::filesystem::path& path);

struct Prediction {
  Eigen::MatrixXd probabilities;  // original_length x num_states
  LabelSequence labels;           // argmax decoding, ties to the lowest class
};

/// Reusable inference wrapper; safe to copy one instance per worker thread.
class Predictor {
 public:
  explicit Predictor(const ModelCheckpoint& checkpoint);
  Prediction predict(const MultivariateSeries& series);
  const ArchitectureConfig& config() const { return network_.config(); }

 private:
  Network network_;
  ChannelNormalizer normalizer_;
};

/// One-shot convenience around Predictor.
Prediction predict(const ModelCheckpoint& checkpoint, const MultivariateSeries& series);

}  // namespace sigstate::nn
