#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sigstate/series.hpp"

namespace sigstate::baseline {

using sigstate::Index;

/// Flattened sliding windows of one flight. Row k covers the window ending
/// at timestep start + k (causal: the label is the state at the window's
/// last timestep); windows are flattened timestep by timestep.
struct WindowedFeatures {
  Eigen::MatrixXd matrix;  // rows x (channels * window)
  std::vector<int> labels;
  Index window = 0;
  Index start = 0;  // first labeled timestep = window - 1
};

WindowedFeatures window_features(const MultivariateSeries& series,
                                 const std::vector<int>& labels, Index window);

/// 13-point log grid from 1e-6 to 1e6.
std::vector<double> default_alpha_grid();

struct RidgeFitConfig {
  std::vector<double> alpha_grid = default_alpha_grid();
  int folds = 5;
  std::uint64_t seed = 0;
};

/// One-vs-rest regularized least squares against one-hot targets; the
/// intercept column is never penalized.
struct RidgeModel {
  Eigen::MatrixXd weights;        // (channels * window) x num_states
  Eigen::RowVectorXd intercept;   // num_states
  double chosen_alpha = 0.0;
  std::vector<double> alpha_grid;
  Index window = 0;
  int num_states = 0;
};

/// Picks alpha by k-fold cross-validated accuracy (folds assigned to rows by
/// a seeded shuffle, pooled accuracy, ties to the smaller alpha), then refits
/// on all rows.
RidgeModel ridge_fit(std::span<const WindowedFeatures> flights, int num_states,
                     const RidgeFitConfig& config = {});

/// argmax of the affine scores per row, ties to the lowest class index.
std::vector<int> ridge_predict(const RidgeModel& model, const Eigen::MatrixXd& features);

}  // namespace sigstate::baseline
