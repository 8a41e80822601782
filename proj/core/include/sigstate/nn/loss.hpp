#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sigstate/errors.hpp"
#include "sigstate/util.hpp"

namespace sigstate::nn {

using sigstate::Index;

/// Soft dice loss, macro-averaged over the classes present in the masked
/// target, with smoothing 1.0:
///   loss = 1 - mean_c (2 sum_t m p g + 1) / (sum_t m p + sum_t m g + 1)
/// Masked positions contribute nothing. Throws ValidationError when the mask
/// selects no positions.
double dice_loss(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& target_one_hot,
                 const Eigen::VectorXd& mask);

struct DiceResult {
  double value = 0.0;
  Eigen::MatrixXd grad;  // d loss / d probs; zero at masked positions
};

DiceResult dice_loss_with_grad(const Eigen::MatrixXd& probs,
                               const Eigen::MatrixXd& target_one_hot,
                               const Eigen::VectorXd& mask);

/// Fraction of unmasked timesteps whose predicted label matches the target.
double masked_accuracy(const std::vector<int>& predicted, const std::vector<int>& target,
                       const Eigen::VectorXd& mask);

}  // namespace sigstate::nn
