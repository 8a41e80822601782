#pragma once

#include <filesystem>
#include <vector>

#include "sigstate/dataset.hpp"
#include "sigstate/nn/checkpoint.hpp"

namespace sigstate::nn {

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_accuracy = 0.0;
};

struct TrainResult {
  ModelCheckpoint checkpoint;  // best validation accuracy
  std::vector<EpochStats> history;
};

/// Trains with Adam on the masked dice loss over shuffled mini-batches.
/// Stops at max_epochs or once validation accuracy has not improved for
/// `patience` epochs, and returns the best-validation checkpoint. Bitwise
/// deterministic for a fixed seed, independent of the worker count: per-sample
/// gradients are always reduced in sample order.
TrainResult train(const Dataset& dataset, const ArchitectureConfig& arch,
                  const TrainingConfig& config, int threads = 0);

/// CSV with one `epoch,train_loss,val_accuracy` row per epoch.
void write_history_csv(const std::vector<EpochStats>& history,
                       const std::filesystem::path& path);
std::vector<EpochStats> read_history_csv(const std::filesystem::path& path);

}  // namespace sigstate::nn
