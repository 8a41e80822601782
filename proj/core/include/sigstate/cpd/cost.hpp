#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigstate/errors.hpp"
#include "sigstate/util.hpp"

namespace sigstate::cpd {

using Eigen::Index;

enum class CostKind { l1, l2, normal, linear, rbf, rank, ar };

std::string to_string(CostKind kind);
CostKind cost_kind_from_string(const std::string& name);

/// Configuration of one segment-cost family. Costs are computed only from
/// the samples inside [a, b).
struct SegmentCostModel {
  CostKind kind = CostKind::l2;
  int ar_order = 4;            // ar
  double rbf_gamma = 0.0;      // rbf; 0 selects the median heuristic
  double cov_ridge = 1e-6;     // normal, rank
  /// Covariate channel indices for the linear model; the remaining channels
  /// are the responses. Empty selects the first half of the channels.
  std::vector<Index> covariates;

  /// Shortest segment this cost is defined on, given the channel count.
  Index min_size(Index num_channels) const;
};

/// A cost model prepared against one signal: precomputes prefix statistics,
/// rank transforms and the RBF bandwidth, then answers segment queries.
class CostEvaluator {
 public:
  CostEvaluator(SegmentCostModel model, Eigen::MatrixXd signal);

  /// Cost of [a, b). Throws ValidationError when the segment is shorter than
  /// min_size() or the bounds are invalid.
  double cost(Index a, Index b) const;

  Index min_size() const { return min_size_; }
  Index length() const { return signal_.rows(); }
  const SegmentCostModel& model() const { return model_; }

 private:
  double cost_l1(Index a, Index b) const;
  double cost_l2(Index a, Index b) const;
  double cost_normal(Index a, Index b) const;
  double cost_linear(Index a, Index b) const;
  double cost_rbf(Index a, Index b) const;
  double cost_rank(Index a, Index b) const;
  double cost_ar(Index a, Index b) const;

  SegmentCostModel model_;
  Eigen::MatrixXd signal_;  // l x n
  Index min_size_ = 1;

  Eigen::MatrixXd prefix_sum_;    // (l+1) x n
  Eigen::MatrixXd prefix_sq_;     // (l+1) x n
  Eigen::MatrixXd prefix_outer_;  // (l+1) x n*(n+1)/2, packed upper triangle
  Eigen::MatrixXd rank_prefix_;   // (l+1) x n, centered ranks
  Eigen::MatrixXd rank_inv_cov_;  // n x n
  Eigen::MatrixXd lin_prefix_;    // (l+1) x d*(d+1)/2 for z = [cov, 1, resp]
  std::vector<Index> covariates_, responses_;
  double rbf_gamma_ = 1.0;
};

/// One-off convenience: prepare and evaluate a single segment.
double segment_cost(const SegmentCostModel& model, const Eigen::MatrixXd& signal,
                    Index a, Index b);

}  // namespace sigstate::cpd
