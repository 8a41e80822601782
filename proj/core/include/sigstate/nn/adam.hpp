#pragma once

#include <vector>

#include "sigstate/nn/config.hpp"
#include "sigstate/nn/layers.hpp"

namespace sigstate::nn {

/// Adam with bias correction. State is keyed by parameter position, so the
/// same optimizer instance must always be stepped with the same parameter
/// list.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(const TrainingConfig& config)
      : lr_(config.learning_rate),
        beta1_(config.beta1),
        beta2_(config.beta2),
        eps_(config.epsilon) {}

  void step(const std::vector<ParamTensor*>& params);

 private:
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
  std::vector<Eigen::MatrixXd> m_, v_;
};

}  // namespace sigstate::nn
