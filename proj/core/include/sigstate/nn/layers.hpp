#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigstate/errors.hpp"
#include "sigstate/util.hpp"

namespace sigstate::nn {

using sigstate::Index;

/// One named parameter matrix and its gradient accumulator.
struct ParamTensor {
  std::string name;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;

  void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

/// Row-wise softmax with max-subtraction.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& scores);
Eigen::MatrixXd relu(const Eigen::MatrixXd& x);
Eigen::MatrixXd leaky_relu(const Eigen::MatrixXd& x, double slope);

/// Glorot-style uniform fill, U(-sqrt(6/(fan_in+fan_out)), +...).
void glorot_init(Eigen::MatrixXd& w, Index fan_in, Index fan_out,
                 std::mt19937_64& rng);

/// Same-padded 1-D convolution over a time-major sequence (L x C_in ->
/// L x C_out, stride 1). Positions outside the sequence read as zero:
///   out(t, o) = bias(o) + sum_{k,i} w(k*C_in+i, o) * in(t + k - K/2, i).
/// Optionally applies ReLU (used between stacked conv layers).
class Conv1dLayer {
 public:
  Conv1dLayer(std::string name, Index in_channels, Index out_channels, Index kernel,
              bool apply_relu);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& input);
  /// Accumulates parameter gradients and returns the input gradient.
  Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_output);

  void init(std::mt19937_64& rng);
  std::vector<ParamTensor*> params() { return {&weight_, &bias_}; }
  Index in_channels() const { return in_c_; }
  Index out_channels() const { return out_c_; }
  Index kernel() const { return kernel_; }

 private:
  Index in_c_, out_c_, kernel_;
  bool relu_;
  ParamTensor weight_;  // (kernel * in_c) x out_c
  ParamTensor bias_;    // 1 x out_c
  Eigen::MatrixXd cols_;    // cached im2col of the last forward
  Eigen::MatrixXd preact_;  // cached pre-activation when relu_ is set
};

/// Sequence-to-sequence GRU, zero initial state:
///   z_t = sigmoid(x_t Wz + h_{t-1} Uz + bz)
///   r_t = sigmoid(x_t Wr + h_{t-1} Ur + br)
///   c_t = tanh(x_t Wh + (r_t . h_{t-1}) Uh + bh)
///   h_t = (1 - z_t) . h_{t-1} + z_t . c_t
class GruLayer {
 public:
  GruLayer(std::string name, Index in_channels, Index hidden);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& input);
  Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_output);

  void init(std::mt19937_64& rng);
  std::vector<ParamTensor*> params();
  Index hidden() const { return hidden_; }

 private:
  Index in_c_, hidden_;
  ParamTensor wz_, uz_, bz_;
  ParamTensor wr_, ur_, br_;
  ParamTensor wh_, uh_, bh_;
  Eigen::MatrixXd x_, z_, r_, c_, h_;  // forward caches, all L x {C,H}
};

enum class Activation { none, leaky_relu, softmax };

/// Time-distributed affine map with an optional fused activation.
class DenseLayer {
 public:
  DenseLayer(std::string name, Index in_channels, Index out_channels,
             Activation activation, double leaky_slope = 0.3);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& input);
  Eigen::MatrixXd backward(const Eigen::MatrixXd& grad_output);

  void init(std::mt19937_64& rng);
  std::vector<ParamTensor*> params() { return {&weight_, &bias_}; }

 private:
  Index in_c_, out_c_;
  Activation act_;
  double slope_;
  ParamTensor weight_;  // in_c x out_c
  ParamTensor bias_;    // 1 x out_c
  Eigen::MatrixXd x_, pre_, out_;
};

}  // namespace sigstate::nn
