#include "sigstate/nn/config.hpp"

namespace sigstate::nn {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::hybrid: return "hybrid";
    case Variant::cnn_only: return "cnn_only";
    case Variant::rnn_only: return "rnn_only";
  }
  return "hybrid";
}

Variant variant_from_string(const std::string& name) {
  if (name == "hybrid") return Variant::hybrid;
  if (name == "cnn_only" || name == "cnn") return Variant::cnn_only;
  if (name == "rnn_only" || name == "rnn") return Variant::rnn_only;
  throw ValidationError("unknown architecture variant: " + name);
}

void ArchitectureConfig::validate() const {
  if (variant == Variant::hybrid && (conv_layers.empty() || gru_layers.empty()))
    throw ValidationError("hybrid variant needs both conv and gru stacks");
  if (variant == Variant::cnn_only && !gru_layers.empty())
    throw ValidationError("cnn_only variant must have an empty gru stack");
  if (variant == Variant::rnn_only && !conv_layers.empty())
    throw ValidationError("rnn_only variant must have an empty conv stack");
  for (const auto& c : conv_layers)
    if (c.filters < 1 || c.kernel < 1)
      throw ValidationError("conv layers need filters >= 1 and kernel >= 1");
  for (Index h : gru_layers)
    if (h < 1) throw ValidationError("gru hidden sizes must be >= 1");
  if (dense_hidden < 1) throw ValidationError("dense_hidden must be >= 1");
  if (!(leaky_slope > 0.0 && leaky_slope < 1.0))
    throw ValidationError("leaky_slope must be in (0, 1)");
  if (num_states < 2) throw ValidationError("num_states must be >= 2");
  if (input_channels < 1) throw ValidationError("input_channels must be >= 1");
  if (max_length < 1) throw ValidationError("max_length must be >= 1");
}

Index ArchitectureConfig::parameter_count() const {
  Index total = 0;
  Index width = input_channels;
  for (const auto& c : conv_layers) {
    total += c.kernel * width * c.filters + c.filters;
    width = c.filters;
  }
  for (Index h : gru_layers) {
    total += 3 * (width * h + h * h + h);
    width = h;
  }
  total += width * dense_hidden + dense_hidden;
  total += dense_hidden * num_states + num_states;
  return total;
}

ArchitectureConfig paper_scale_config(int num_states, Index input_channels) {
  ArchitectureConfig c;
  c.num_states = num_states;
  c.input_channels = input_channels;
  return c;
}

ArchitectureConfig desk_scale_config(int num_states, Index input_channels) {
  ArchitectureConfig c;
  c.conv_layers = {{32, 3}, {32, 5}, {32, 10}};
  c.gru_layers = {64};
  c.dense_hidden = 128;
  c.num_states = num_states;
  c.input_channels = input_channels;
  c.max_length = 3000;
  return c;
}

ArchitectureConfig with_variant(ArchitectureConfig config, Variant variant) {
  config.variant = variant;
  if (variant == Variant::cnn_only) config.gru_layers.clear();
  if (variant == Variant::rnn_only) config.conv_layers.clear();
  return config;
}

void TrainingConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be positive");
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
    throw ValidationError("adam betas must be in (0, 1)");
  if (!(epsilon > 0.0)) throw ValidationError("adam epsilon must be positive");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (max_epochs < 1) throw ValidationError("max_epochs must be >= 1");
  if (patience < 1) throw ValidationError("patience must be >= 1");
}

}  // namespace sigstate::nn
