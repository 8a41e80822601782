#include "sigstate/metrics/cpd_metrics.hpp"

#include <algorithm>
#include <cmath>

namespace sigstate::metrics {

CpdConfusion cpd_confusion(std::span<const Index> true_points,
                           std::span<const Index> predicted_points, Index tau_samples,
                           MatchMode mode) {
  if (tau_samples <= 0)
    throw ValidationError("cpd_confusion: tolerance must be positive");
  for (Index t : true_points)
    if (t <= 0) throw ValidationError("cpd_confusion: true points must exclude t=0");
  for (Index t : predicted_points)
    if (t <= 0)
      throw ValidationError("cpd_confusion: predicted points must exclude t=0");

  CpdConfusion out;
  out.tau_samples = tau_samples;
  if (mode == MatchMode::set_membership) {
    for (Index p : predicted_points) {
      bool hit = std::any_of(true_points.begin(), true_points.end(), [&](Index t) {
        return std::abs(t - p) < tau_samples;
      });
      hit ? ++out.tp : ++out.fp;
    }
    for (Index t : true_points) {
      bool hit = std::any_of(predicted_points.begin(), predicted_points.end(),
                             [&](Index p) { return std::abs(t - p) < tau_samples; });
      if (!hit) ++out.fn;
    }
    return out;
  }

  // Greedy one-to-one: predictions in time order take the nearest still
  // unmatched true point within the margin (earlier one on distance ties).
  std::vector<Index> pred(predicted_points.begin(), predicted_points.end());
  std::vector<Index> truth(true_points.begin(), true_points.end());
  std::sort(pred.begin(), pred.end());
  std::sort(truth.begin(), truth.end());
  std::vector<bool> used(truth.size(), false);
  for (Index p : pred) {
    long best = -1;
    Index best_dist = tau_samples;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (used[i]) continue;
      Index dist = std::abs(truth[i] - p);
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<long>(i);
      }
    }
    if (best >= 0) {
      used[static_cast<std::size_t>(best)] = true;
      ++out.tp;
    } else {
      ++out.fp;
    }
  }
  for (bool u : used)
    if (!u) ++out.fn;
  return out;
}

CpdConfusion cpd_confusion_seconds(std::span<const Index> true_points,
                                   std::span<const Index> predicted_points,
                                   double tau_seconds, double sample_rate_hz,
                                   MatchMode mode) {
  Index tau_samples = static_cast<Index>(std::llround(tau_seconds * sample_rate_hz));
  if (tau_samples <= 0)
    throw ValidationError("cpd_confusion: tau " + std::to_string(tau_seconds) +
                          "s rounds to a non-positive sample tolerance");
  return cpd_confusion(true_points, predicted_points, tau_samples, mode);
}

Prf cpd_prf(const CpdConfusion& c) {
  Prf out;
  if (c.tp + c.fp > 0) out.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) out.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (out.precision + out.recall > 0.0)
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

}  // namespace sigstate::metrics
