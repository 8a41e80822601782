#pragma once

#include <vector>

#include "sigstate/nn/config.hpp"
#include "sigstate/nn/layers.hpp"

namespace sigstate::nn {

/// The assembled sequence labeler: conv stack (ReLU between layers), GRU
/// stack, leaky-ReLU dense hidden layer, softmax output head. Which stacks
/// exist depends on the config variant. Instances are cheap to copy; copies
/// share nothing, which is how per-worker replicas are made during training.
class Network {
 public:
  explicit Network(const ArchitectureConfig& config);

  void init_params(std::uint64_t seed);

  /// input is length x input_channels; returns per-timestep class
  /// probabilities (length x num_states). Caches activations for backward.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input);

  /// grad_probs is d loss / d probabilities from the last forward call.
  /// Accumulates parameter gradients; returns d loss / d input.
  Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_probs);

  /// Parameters in a stable, config-determined order.
  std::vector<ParamTensor*> parameters();
  std::vector<const ParamTensor*> parameters() const;
  void zero_grads();

  const ArchitectureConfig& config() const { return config_; }

 private:
  ArchitectureConfig config_;
  std::vector<Conv1dLayer> convs_;
  std::vector<GruLayer> grus_;
  DenseLayer hidden_;
  DenseLayer output_;
};

}  // namespace sigstate::nn
