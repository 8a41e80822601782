#pragma once

#include <vector>

#include "sigstate/cpd/cost.hpp"
#include "sigstate/series.hpp"

namespace sigstate::cpd {

/// Result of one segmentation run. Breakpoints are interior sample indices,
/// sorted ascending; the objective adds a linear per-breakpoint penalty.
struct SegmentationResult {
  std::vector<Index> breakpoints;
  double total_cost = 0.0;
  double objective = 0.0;
};

/// Full merge history of a bottom-up run: the initial grid and every removal
/// (cheapest merge first) together with the merge gain at removal time.
/// A penalized result for any penalty is a prefix of this sequence, so one
/// trajectory serves a whole penalty sweep.
struct BottomUpTrajectory {
  std::vector<Index> grid;
  struct Removal {
    Index breakpoint;
    double gain;
  };
  std::vector<Removal> removals;
};

/// Evenly spaced starting breakpoints for bottom-up merging. The spacing is
/// `jump` widened to the next multiple that respects min_size, and points too
/// close to the end are dropped so every starting segment is valid.
std::vector<Index> initial_grid(Index length, Index jump, Index min_size);

BottomUpTrajectory bottom_up_trajectory(const CostEvaluator& cost, Index jump,
                                        Index min_size = 0);

/// Surviving breakpoints for one penalty: merges are replayed while the
/// recorded gain stays below the penalty.
SegmentationResult apply_penalty(const BottomUpTrajectory& trajectory,
                                 const CostEvaluator& cost, double penalty);

/// Greedy bottom-up segmentation. Starts from the jump grid and repeatedly
/// removes the breakpoint whose removal raises the total cost the least,
/// while that merge gain is below the penalty. Ties go to the smallest index.
SegmentationResult bottom_up(const Eigen::MatrixXd& signal,
                             const SegmentCostModel& model, double penalty,
                             Index jump = 5, Index min_size = 0);

/// Window discrepancy search: d(t) = cost(t-w/2, t+w/2) - cost(t-w/2, t)
/// - cost(t, t+w/2); local maxima with d(t) > penalty are reported after
/// non-maximum suppression within w/2 samples.
SegmentationResult window_based(const Eigen::MatrixXd& signal,
                                const SegmentCostModel& model, double penalty,
                                Index width = 100);

enum class SearchMethod { bottom_up, window };

std::string to_string(SearchMethod method);
SearchMethod search_method_from_string(const std::string& name);

struct DetectConfig {
  SearchMethod search = SearchMethod::bottom_up;
  SegmentCostModel cost;
  double penalty = 100.0;
  Index width = 100;  // window search
  Index jump = 5;     // bottom-up grid
  /// Standardize each channel over the flight before computing costs, so one
  /// penalty scale is comparable across channels and flights.
  bool normalize = true;
};

/// Label-free change detection on one series; returns change timestamps.
std::vector<Index> detect(const MultivariateSeries& series, const DetectConfig& config);

}  // namespace sigstate::cpd
