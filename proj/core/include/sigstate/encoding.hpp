#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sigstate/series.hpp"

namespace sigstate {

/// A series padded to a fixed length plus its validity mask.
/// mask(j) is 1 for j < original_length and 0 afterwards; padded data rows
/// are all-zero.
struct PaddedBatch {
  Eigen::MatrixXd data;   // target_length x channels
  Eigen::VectorXd mask;   // target_length
  Index original_length = 0;
};

/// Per-timestep state ids in dense form, optionally with a cached one-hot
/// expansion (rows are indicator vectors).
struct LabelSequence {
  std::vector<int> states;
  std::optional<Eigen::MatrixXd> one_hot;

  Index length() const { return static_cast<Index>(states.size()); }
};

/// Zero-pads a series to target_length and builds the validity mask.
/// Throws ValidationError when the series is longer than the target.
PaddedBatch pad_and_mask(const MultivariateSeries& series, Index target_length);

/// Expands a change-point annotation into one state id per timestep: position
/// t holds the state of the latest entry with timestamp <= t. Positions past
/// the last real sample repeat the final state (they are masked out downstream).
LabelSequence expand_labels(const StateAnnotation& annotation, Index length);

/// Indicator-vector expansion, row t one-hot at states[t].
/// Throws ValidationError when a state id is outside [0, num_states).
Eigen::MatrixXd one_hot_encode(const LabelSequence& labels, int num_states);

/// Row-wise argmax with ties broken toward the lowest class index.
std::vector<int> argmax_decode(const Eigen::MatrixXd& probabilities);

/// Positions where the label changes: {(t, s_t) | s_t != s_{t-1}, t >= 1},
/// restricted to unmasked positions. The initial state at t = 0 is not a
/// change. Pass an empty mask to treat every position as valid.
ChangeList derive_change_points(const LabelSequence& labels,
                                const Eigen::VectorXd& mask = Eigen::VectorXd());

}  // namespace sigstate
