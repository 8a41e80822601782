#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sigstate/series.hpp"

namespace sigstate::metrics {

using sigstate::Index;

/// How to average classes that never occur in either truth or prediction.
enum class AbsentClassPolicy {
  exclude,          // drop them from the macro mean
  include_as_zero,  // count them with precision = recall = 0
};

struct ClassificationScores {
  std::vector<long> tp, pred_count, true_count;  // per class
  std::vector<double> precision, recall;         // per class
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;  // harmonic mean of the macro averages
  long included_classes = 0;
};

/// Per-class precision/recall over unmasked positions, averaged unweighted.
/// A class missing from the prediction but present in truth scores precision
/// 0 (and vice versa for recall). Pass an empty mask to use every position.
ClassificationScores macro_prf(std::span<const int> truth, std::span<const int> predicted,
                               const Eigen::VectorXd& mask, int num_states,
                               AbsentClassPolicy policy = AbsentClassPolicy::exclude);

/// Accumulating variant used to pool scores across flights.
class MacroAccumulator {
 public:
  explicit MacroAccumulator(int num_states);
  void add(std::span<const int> truth, std::span<const int> predicted,
           const Eigen::VectorXd& mask);
  ClassificationScores finish(AbsentClassPolicy policy = AbsentClassPolicy::exclude) const;

 private:
  std::vector<long> tp_, pred_, true_;
};

}  // namespace sigstate::metrics
