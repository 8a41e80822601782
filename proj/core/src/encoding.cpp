#include "sigstate/encoding.hpp"

namespace sigstate {

PaddedBatch pad_and_mask(const MultivariateSeries& series, Index target_length) {
  const Index l = series.length();
  if (l > target_length)
    throw ValidationError("pad_and_mask: series length " + std::to_string(l) +
                          " exceeds target length " + std::to_string(target_length));
  PaddedBatch out;
  out.data = Eigen::MatrixXd::Zero(target_length, series.num_channels());
  out.data.topRows(l) = series.values;
  out.mask = Eigen::VectorXd::Zero(target_length);
  out.mask.head(l).setOnes();
  out.original_length = l;
  return out;
}

LabelSequence expand_labels(const StateAnnotation& annotation, Index length) {
  if (annotation.entries.empty())
    throw ValidationError("expand_labels: annotation has no entries");
  if (annotation.entries.front().t != 0)
    throw ValidationError("expand_labels: annotation must start at t=0");
  if (annotation.entries.back().t >= length)
    throw ValidationError("expand_labels: annotation timestamp " +
                          std::to_string(annotation.entries.back().t) +
                          " out of range for length " + std::to_string(length));
  LabelSequence out;
  out.states.resize(static_cast<std::size_t>(length));
  std::size_t next = 1;
  int current = annotation.entries.front().state;
  for (Index t = 0; t < length; ++t) {
    while (next < annotation.entries.size() && annotation.entries[next].t == t) {
      current = annotation.entries[next].state;
      ++next;
    }
    out.states[static_cast<std::size_t>(t)] = current;
  }
  return out;
}

Eigen::MatrixXd one_hot_encode(const LabelSequence& labels, int num_states) {
  const Index l = labels.length();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(l, num_states);
  for (Index t = 0; t < l; ++t) {
    int s = labels.states[static_cast<std::size_t>(t)];
    if (s < 0 || s >= num_states)
      throw ValidationError("one_hot_encode: state id " + std::to_string(s) +
                            " out of range [0, " + std::to_string(num_states) + ")");
    out(t, s) = 1.0;
  }
  return out;
}

std::vector<int> argmax_decode(const Eigen::MatrixXd& probabilities) {
  std::vector<int> out(static_cast<std::size_t>(probabilities.rows()));
  for (Index t = 0; t < probabilities.rows(); ++t) {
    int best = 0;
    double best_v = probabilities(t, 0);
    for (Index c = 1; c < probabilities.cols(); ++c) {
      if (probabilities(t, c) > best_v) {
        best_v = probabilities(t, c);
        best = static_cast<int>(c);
      }
    }
    out[static_cast<std::size_t>(t)] = best;
  }
  return out;
}

ChangeList derive_change_points(const LabelSequence& labels,
                                const Eigen::VectorXd& mask) {
  const Index l = labels.length();
  if (mask.size() != 0 && mask.size() != l)
    throw ShapeError("derive_change_points: mask length does not match labels");
  auto valid = [&](Index t) { return mask.size() == 0 || mask(t) != 0.0; };
  ChangeList out;
  for (Index t = 1; t < l; ++t) {
    if (!valid(t) || !valid(t - 1)) continue;
    int prev = labels.states[static_cast<std::size_t>(t - 1)];
    int cur = labels.states[static_cast<std::size_t>(t)];
    if (cur != prev) out.push_back({t, cur});
  }
  return out;
}

}  // namespace sigstate
