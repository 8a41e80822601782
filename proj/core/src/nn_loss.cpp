#include "sigstate/nn/loss.hpp"

namespace sigstate::nn {

namespace {
constexpr double kSmoothing = 1.0;

void check_shapes(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& target,
                  const Eigen::VectorXd& mask) {
  if (probs.rows() != target.rows() || probs.cols() != target.cols())
    throw ShapeError("dice loss: probs and target shapes differ");
  if (mask.size() != probs.rows())
    throw ShapeError("dice loss: mask length does not match sequence");
}
}  // namespace

DiceResult dice_loss_with_grad(const Eigen::MatrixXd& probs,
                               const Eigen::MatrixXd& target_one_hot,
                               const Eigen::VectorXd& mask) {
  check_shapes(probs, target_one_hot, mask);
  const Index classes = probs.cols();

  if (mask.sum() <= 0.0)
    throw ValidationError("dice loss: mask selects no positions");

  // Masked per-class sums.
  Eigen::MatrixXd masked_probs = probs.array().colwise() * mask.array();
  Eigen::MatrixXd masked_target = target_one_hot.array().colwise() * mask.array();
  Eigen::RowVectorXd sum_pg =
      (masked_probs.array() * target_one_hot.array()).colwise().sum();
  Eigen::RowVectorXd sum_p = masked_probs.colwise().sum();
  Eigen::RowVectorXd sum_g = masked_target.colwise().sum();

  DiceResult out;
  out.grad.setZero(probs.rows(), classes);
  double dice_sum = 0.0;
  Index present = 0;
  std::vector<Index> present_classes;
  for (Index c = 0; c < classes; ++c)
    if (sum_g(c) > 0.0) {
      ++present;
      present_classes.push_back(c);
    }
  if (present == 0)
    throw ValidationError("dice loss: no class present in the masked target");

  for (Index c : present_classes) {
    double num = 2.0 * sum_pg(c) + kSmoothing;
    double den = sum_p(c) + sum_g(c) + kSmoothing;
    dice_sum += num / den;
    // d dice_c / d p_{t,c} = m_t * (2 g - num/den) / den
    double inv_den = 1.0 / den;
    for (Index t = 0; t < probs.rows(); ++t) {
      if (mask(t) == 0.0) continue;
      double d = (2.0 * target_one_hot(t, c) - num * inv_den) * inv_den;
      out.grad(t, c) = -d / static_cast<double>(present);
    }
  }
  out.value = 1.0 - dice_sum / static_cast<double>(present);
  return out;
}

double dice_loss(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& target_one_hot,
                 const Eigen::VectorXd& mask) {
  return dice_loss_with_grad(probs, target_one_hot, mask).value;
}

double masked_accuracy(const std::vector<int>& predicted, const std::vector<int>& target,
                       const Eigen::VectorXd& mask) {
  if (predicted.size() != target.size())
    throw ShapeError("masked_accuracy: label lengths differ");
  if (mask.size() != static_cast<Index>(predicted.size()))
    throw ShapeError("masked_accuracy: mask length mismatch");
  double correct = 0.0, total = 0.0;
  for (Index t = 0; t < mask.size(); ++t) {
    if (mask(t) == 0.0) continue;
    total += 1.0;
    if (predicted[static_cast<std::size_t>(t)] == target[static_cast<std::size_t>(t)])
      correct += 1.0;
  }
  if (total == 0.0) throw ValidationError("masked_accuracy: mask selects no positions");
  return correct / total;
}

}  // namespace sigstate::nn
