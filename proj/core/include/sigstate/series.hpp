#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigstate/errors.hpp"

namespace sigstate {

using Eigen::Index;

/// One recorded execution of the system under observation: n aligned signal
/// channels sampled at a fixed rate. Values are stored time-major, so
/// values(t, c) is channel c at sample t.
struct MultivariateSeries {
  Eigen::MatrixXd values;                  // length x channels
  double sample_rate_hz = 5.0;
  std::vector<std::string> channel_names;  // one per column

  Index length() const { return values.rows(); }
  Index num_channels() const { return values.cols(); }

  /// Throws ValidationError unless all channels share one length,
  /// there are at least two channels and the rate is positive.
  void validate() const;
};

/// Ordered change-point list. Entry (t, state) records that the system
/// entered `state` at sample t; the first entry carries the initial state
/// at t = 0.
struct StateAnnotation {
  struct Entry {
    Index t = 0;
    int state = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::vector<Entry> entries;
  int num_states = 0;

  /// Throws ValidationError unless entries start at t = 0, are strictly
  /// increasing, never repeat a state back to back and stay inside
  /// [0, series_length) x [0, num_states).
  void validate(Index series_length) const;

  /// State in effect at sample t (latest entry with timestamp <= t).
  int state_at(Index t) const;

  bool empty() const { return entries.empty(); }
};

/// Change timestamps only, without the initial-state entry. This is the
/// output shape of derive_change_points and of the CPD detectors.
using ChangeList = std::vector<StateAnnotation::Entry>;

/// Change timestamps of an annotation, excluding the t = 0 entry. This is
/// the set CPD metrics score against.
std::vector<Index> change_timestamps(const StateAnnotation& annotation);

}  // namespace sigstate
