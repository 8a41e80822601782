#include "sigstate/metrics/classification.hpp"

namespace sigstate::metrics {

MacroAccumulator::MacroAccumulator(int num_states)
    : tp_(static_cast<std::size_t>(num_states), 0),
      pred_(static_cast<std::size_t>(num_states), 0),
      true_(static_cast<std::size_t>(num_states), 0) {
  if (num_states < 1) throw ValidationError("macro_prf: num_states must be >= 1");
}

void MacroAccumulator::add(std::span<const int> truth, std::span<const int> predicted,
                           const Eigen::VectorXd& mask) {
  if (truth.size() != predicted.size())
    throw ShapeError("macro_prf: truth and prediction lengths differ (" +
                     std::to_string(truth.size()) + " vs " +
                     std::to_string(predicted.size()) + ")");
  if (mask.size() != 0 && mask.size() != static_cast<Index>(truth.size()))
    throw ShapeError("macro_prf: mask length mismatch");
  const int num_states = static_cast<int>(tp_.size());
  for (std::size_t t = 0; t < truth.size(); ++t) {
    if (mask.size() != 0 && mask(static_cast<Index>(t)) == 0.0) continue;
    int g = truth[t], p = predicted[t];
    if (g < 0 || g >= num_states || p < 0 || p >= num_states)
      throw ValidationError("macro_prf: state id out of range");
    ++true_[static_cast<std::size_t>(g)];
    ++pred_[static_cast<std::size_t>(p)];
    if (g == p) ++tp_[static_cast<std::size_t>(g)];
  }
}

ClassificationScores MacroAccumulator::finish(AbsentClassPolicy policy) const {
  ClassificationScores out;
  const std::size_t num_states = tp_.size();
  out.tp = tp_;
  out.pred_count = pred_;
  out.true_count = true_;
  out.precision.assign(num_states, 0.0);
  out.recall.assign(num_states, 0.0);
  double prec_sum = 0.0, rec_sum = 0.0;
  long included = 0;
  for (std::size_t s = 0; s < num_states; ++s) {
    bool seen = pred_[s] > 0 || true_[s] > 0;
    if (pred_[s] > 0)
      out.precision[s] = static_cast<double>(tp_[s]) / static_cast<double>(pred_[s]);
    if (true_[s] > 0)
      out.recall[s] = static_cast<double>(tp_[s]) / static_cast<double>(true_[s]);
    if (policy == AbsentClassPolicy::exclude && !seen) continue;
    prec_sum += out.precision[s];
    rec_sum += out.recall[s];
    ++included;
  }
  out.included_classes = included;
  if (included > 0) {
    out.macro_precision = prec_sum / static_cast<double>(included);
    out.macro_recall = rec_sum / static_cast<double>(included);
  }
  if (out.macro_precision + out.macro_recall > 0.0)
    out.macro_f1 = 2.0 * out.macro_precision * out.macro_recall /
                   (out.macro_precision + out.macro_recall);
  return out;
}

ClassificationScores macro_prf(std::span<const int> truth, std::span<const int> predicted,
                               const Eigen::VectorXd& mask, int num_states,
                               AbsentClassPolicy policy) {
  MacroAccumulator acc(num_states);
  acc.add(truth, predicted, mask);
  return acc.finish(policy);
}

}  // namespace sigstate::metrics
