#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigstate/errors.hpp"
#include "sigstate/util.hpp"

namespace sigstate::nn {

using sigstate::Index;

enum class Variant { hybrid, cnn_only, rnn_only };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct ConvSpec {
  Index filters = 64;
  Index kernel = 3;
  friend bool operator==(const ConvSpec&, const ConvSpec&) = default;
};

/// Shape of the sequence labeler: a 1-D convolution stack, a GRU stack and a
/// time-distributed dense head ending in softmax over the state classes.
struct ArchitectureConfig {
  Variant variant = Variant::hybrid;
  std::vector<ConvSpec> conv_layers = {{64, 3}, {64, 5}, {64, 10}, {64, 15}, {64, 20}};
  std::vector<Index> gru_layers = {128, 128};
  Index dense_hidden = 128;
  double leaky_slope = 0.3;
  int num_states = 25;
  Index input_channels = 10;
  Index max_length = 18000;

  void validate() const;

  /// Total number of scalar parameters, from the layer shapes alone.
  Index parameter_count() const;

  friend bool operator==(const ArchitectureConfig&, const ArchitectureConfig&) = default;
};

/// The full-size configuration. CPU-heavy; meant for real datasets.
ArchitectureConfig paper_scale_config(int num_states = 25, Index input_channels = 10);

/// A small profile for CI-speed runs: 3 conv layers of 32 filters, one GRU
/// of 64, max length 3000.
ArchitectureConfig desk_scale_config(int num_states = 9, Index input_channels = 10);

/// Returns config reshaped to the given variant: cnn_only drops the GRU
/// stack, rnn_only drops the conv stack.
ArchitectureConfig with_variant(ArchitectureConfig config, Variant variant);

struct TrainingConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  Index batch_size = 4;
  int max_epochs = 80;
  int patience = 10;  // epochs without a validation-accuracy improvement
  std::uint64_t seed = 0;

  void validate() const;
};

}  // namespace sigstate::nn
