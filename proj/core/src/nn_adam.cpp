#include "sigstate/nn/adam.hpp"

#include <cmath>

namespace sigstate::nn {

void AdamOptimizer::step(const std::vector<ParamTensor*>& params) {
  if (m_.empty()) {
    m_.resize(params.size());
    v_.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i].setZero(params[i]->value.rows(), params[i]->value.cols());
      v_[i].setZero(params[i]->value.rows(), params[i]->value.cols());
    }
  }
  if (m_.size() != params.size())
    throw ValidationError("adam: parameter list changed between steps");
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    ParamTensor& p = *params[i];
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p.grad;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * p.grad.array().square().matrix();
    p.value.array() -=
        lr_ * (m_[i].array() / bc1) / ((v_[i].array() / bc2).sqrt() + eps_);
  }
}

}  // namespace sigstate::nn
