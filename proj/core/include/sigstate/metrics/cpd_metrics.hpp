#pragma once

#include <span>
#include <vector>

#include "sigstate/series.hpp"

namespace sigstate::metrics {

using sigstate::Index;

/// Tolerance-margin confusion counts for change-point detection.
struct CpdConfusion {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  Index tau_samples = 0;
};

enum class MatchMode {
  /// Set-membership counting: a prediction is a TP when any true point lies
  /// strictly within tau samples, and a true point is missed when no
  /// prediction does. One true point may absorb several predictions.
  set_membership,
  /// Greedy one-to-one matching, for analysis only.
  one_to_one,
};

/// Counts are over change timestamps only; both sides must already exclude
/// t = 0 (use change_timestamps for annotations). tau_samples must be > 0.
CpdConfusion cpd_confusion(std::span<const Index> true_points,
                           std::span<const Index> predicted_points, Index tau_samples,
                           MatchMode mode = MatchMode::set_membership);

/// Seconds-based wrapper: tau_samples = round(tau_seconds * sample_rate_hz).
CpdConfusion cpd_confusion_seconds(std::span<const Index> true_points,
                                   std::span<const Index> predicted_points,
                                   double tau_seconds, double sample_rate_hz,
                                   MatchMode mode = MatchMode::set_membership);

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// precision = tp/(tp+fp), recall = tp/(tp+fn), f1 their harmonic mean;
/// each is 0 when its denominator is 0.
Prf cpd_prf(const CpdConfusion& confusion);

}  // namespace sigstate::metrics
