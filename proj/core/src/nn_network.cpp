#include "sigstate/nn/network.hpp"

namespace sigstate::nn {

namespace {

Index head_input_width(const ArchitectureConfig& c) {
  Index width = c.input_channels;
  if (!c.conv_layers.empty()) width = c.conv_layers.back().filters;
  if (!c.gru_layers.empty()) width = c.gru_layers.back();
  return width;
}

}  // namespace

Network::Network(const ArchitectureConfig& config)
    : config_(config),
      hidden_("dense", head_input_width(config), config.dense_hidden,
              Activation::leaky_relu, config.leaky_slope),
      output_("output", config.dense_hidden, config.num_states, Activation::softmax) {
  config_.validate();
  Index width = config_.input_channels;
  for (std::size_t i = 0; i < config_.conv_layers.size(); ++i) {
    const auto& spec = config_.conv_layers[i];
    convs_.emplace_back("conv" + std::to_string(i), width, spec.filters, spec.kernel,
                        /*apply_relu=*/true);
    width = spec.filters;
  }
  for (std::size_t i = 0; i < config_.gru_layers.size(); ++i) {
    grus_.emplace_back("gru" + std::to_string(i), width, config_.gru_layers[i]);
    width = config_.gru_layers[i];
  }
}

void Network::init_params(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (auto& c : convs_) c.init(rng);
  for (auto& g : grus_) g.init(rng);
  hidden_.init(rng);
  output_.init(rng);
}

Eigen::MatrixXd Network::forward(const Eigen::MatrixXd& input) {
  if (input.cols() != config_.input_channels)
    throw ShapeError("network: expected " + std::to_string(config_.input_channels) +
                     " channels, got " + std::to_string(input.cols()));
  Eigen::MatrixXd x = input;
  for (auto& c : convs_) x = c.forward(x);
  for (auto& g : grus_) x = g.forward(x);
  x = hidden_.forward(x);
  return output_.forward(x);
}

Eigen::MatrixXd Network::backward(const Eigen::MatrixXd& grad_probs) {
  Eigen::MatrixXd g = output_.backward(grad_probs);
  g = hidden_.backward(g);
  for (auto it = grus_.rbegin(); it != grus_.rend(); ++it) g = it->backward(g);
  for (auto it = convs_.rbegin(); it != convs_.rend(); ++it) g = it->backward(g);
  return g;
}

std::vector<ParamTensor*> Network::parameters() {
  std::vector<ParamTensor*> out;
  for (auto& c : convs_)
    for (auto* p : c.params()) out.push_back(p);
  for (auto& g : grus_)
    for (auto* p : g.params()) out.push_back(p);
  for (auto* p : hidden_.params()) out.push_back(p);
  for (auto* p : output_.params()) out.push_back(p);
  return out;
}

std::vector<const ParamTensor*> Network::parameters() const {
  auto mutable_params = const_cast<Network*>(this)->parameters();
  return {mutable_params.begin(), mutable_params.end()};
}

void Network::zero_grads() {
  for (auto* p : parameters()) p->zero_grad();
}

}  // namespace sigstate::nn
