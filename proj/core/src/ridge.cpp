#include "sigstate/baseline/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>

namespace sigstate::baseline {

WindowedFeatures window_features(const MultivariateSeries& series,
                                 const std::vector<int>& labels, Index window) {
  if (window < 1) throw ValidationError("window width must be >= 1");
  const Index l = series.length();
  const Index n = series.num_channels();
  if (l < window)
    throw ValidationError("series of length " + std::to_string(l) +
                          " shorter than window " + std::to_string(window));
  if (static_cast<Index>(labels.size()) != l)
    throw ShapeError("window_features: labels length mismatch");

  WindowedFeatures out;
  out.window = window;
  out.start = window - 1;
  const Index rows = l - window + 1;
  out.matrix.resize(rows, n * window);
  out.labels.resize(static_cast<std::size_t>(rows));
  for (Index t = window - 1; t < l; ++t) {
    const Index row = t - (window - 1);
    for (Index k = 0; k < window; ++k)
      out.matrix.block(row, k * n, 1, n) = series.values.row(t - window + 1 + k);
    out.labels[static_cast<std::size_t>(row)] = labels[static_cast<std::size_t>(t)];
  }
  return out;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int e = -6; e <= 6; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

namespace {

// Solves (G + alpha*J) W = M with J = diag(1,...,1,0): the trailing
// intercept row/column is unpenalized.
Eigen::MatrixXd solve_ridge(const Eigen::MatrixXd& gram, const Eigen::MatrixXd& moment,
                            double alpha) {
  Eigen::MatrixXd reg = gram;
  const Index d = gram.rows();
  for (Index i = 0; i + 1 < d; ++i) reg(i, i) += alpha;
  return reg.ldlt().solve(moment);
}

}  // namespace

RidgeModel ridge_fit(std::span<const WindowedFeatures> flights, int num_states,
                     const RidgeFitConfig& config) {
  if (flights.empty()) throw ValidationError("ridge_fit: no feature blocks");
  if (config.folds < 2) throw ValidationError("ridge_fit: folds must be >= 2");
  if (config.alpha_grid.empty()) throw ValidationError("ridge_fit: empty alpha grid");
  const Index d = flights.front().matrix.cols();
  const Index window = flights.front().window;
  Index total_rows = 0;
  for (const auto& f : flights) {
    if (f.matrix.cols() != d)
      throw ShapeError("ridge_fit: inconsistent feature widths");
    total_rows += f.matrix.rows();
  }
  if (total_rows < config.folds)
    throw ValidationError("ridge_fit: fewer rows than folds");

  // Class presence check.
  std::vector<long> class_count(static_cast<std::size_t>(num_states), 0);
  for (const auto& f : flights)
    for (int s : f.labels) {
      if (s < 0 || s >= num_states)
        throw ValidationError("ridge_fit: label out of range");
      ++class_count[static_cast<std::size_t>(s)];
    }
  int present = 0;
  for (long c : class_count)
    if (c > 0) ++present;
  if (present < 2)
    throw ValidationError("ridge_fit: need at least 2 classes present");

  // Row -> fold assignment by seeded shuffle.
  std::vector<int> fold_of(static_cast<std::size_t>(total_rows));
  {
    std::vector<Index> rows(static_cast<std::size_t>(total_rows));
    std::iota(rows.begin(), rows.end(), 0);
    std::mt19937_64 rng(config.seed);
    std::shuffle(rows.begin(), rows.end(), rng);
    for (Index k = 0; k < total_rows; ++k)
      fold_of[static_cast<std::size_t>(rows[static_cast<std::size_t>(k)])] =
          static_cast<int>(k % config.folds);
  }

  // Per-fold Gram and moment accumulation over augmented rows [x, 1].
  const Index da = d + 1;
  std::vector<Eigen::MatrixXd> gram_fold(
      static_cast<std::size_t>(config.folds), Eigen::MatrixXd::Zero(da, da));
  std::vector<Eigen::MatrixXd> moment_fold(
      static_cast<std::size_t>(config.folds), Eigen::MatrixXd::Zero(da, num_states));
  bool all_rows_identical = true;
  Eigen::RowVectorXd first_row;
  {
    Index row_index = 0;
    Eigen::VectorXd z(da);
    for (const auto& f : flights) {
      for (Index r = 0; r < f.matrix.rows(); ++r, ++row_index) {
        z.head(d) = f.matrix.row(r).transpose();
        z(d) = 1.0;
        int fold = fold_of[static_cast<std::size_t>(row_index)];
        gram_fold[static_cast<std::size_t>(fold)]
            .selfadjointView<Eigen::Lower>()
            .rankUpdate(z);
        moment_fold[static_cast<std::size_t>(fold)].col(
            f.labels[static_cast<std::size_t>(r)]) += z;
        if (first_row.size() == 0)
          first_row = f.matrix.row(r);
        else if (all_rows_identical && f.matrix.row(r) != first_row)
          all_rows_identical = false;
      }
    }
  }
  if (all_rows_identical)
    std::cerr << "[warn] ridge_fit: all feature rows are identical\n";
  Eigen::MatrixXd gram_total = Eigen::MatrixXd::Zero(da, da);
  Eigen::MatrixXd moment_total = Eigen::MatrixXd::Zero(da, num_states);
  for (int f = 0; f < config.folds; ++f) {
    gram_fold[static_cast<std::size_t>(f)] =
        gram_fold[static_cast<std::size_t>(f)].selfadjointView<Eigen::Lower>();
    gram_total += gram_fold[static_cast<std::size_t>(f)];
    moment_total += moment_fold[static_cast<std::size_t>(f)];
  }

  // Cross-validated accuracy per alpha: train on total minus fold, score the
  // fold's rows, pool counts.
  const std::size_t n_alpha = config.alpha_grid.size();
  std::vector<long> correct(n_alpha, 0);
  std::vector<Eigen::MatrixXd> fold_weights(static_cast<std::size_t>(config.folds) *
                                            n_alpha);
  for (int f = 0; f < config.folds; ++f) {
    Eigen::MatrixXd gram_train = gram_total - gram_fold[static_cast<std::size_t>(f)];
    Eigen::MatrixXd moment_train =
        moment_total - moment_fold[static_cast<std::size_t>(f)];
    for (std::size_t a = 0; a < n_alpha; ++a)
      fold_weights[static_cast<std::size_t>(f) * n_alpha + a] =
          solve_ridge(gram_train, moment_train, config.alpha_grid[a]);
  }
  {
    Index row_index = 0;
    Eigen::VectorXd z(da);
    for (const auto& f : flights) {
      for (Index r = 0; r < f.matrix.rows(); ++r, ++row_index) {
        int fold = fold_of[static_cast<std::size_t>(row_index)];
        z.head(d) = f.matrix.row(r).transpose();
        z(d) = 1.0;
        for (std::size_t a = 0; a < n_alpha; ++a) {
          const Eigen::MatrixXd& w =
              fold_weights[static_cast<std::size_t>(fold) * n_alpha + a];
          Eigen::RowVectorXd scores = z.transpose() * w;
          Index arg = 0;
          scores.maxCoeff(&arg);
          // maxCoeff already returns the first maximal index (lowest class)
          if (static_cast<int>(arg) == f.labels[static_cast<std::size_t>(r)])
            ++correct[a];
        }
      }
    }
  }

  std::size_t best_a = 0;
  for (std::size_t a = 1; a < n_alpha; ++a)
    if (correct[a] > correct[best_a]) best_a = a;  // ties keep the smaller alpha

  RidgeModel model;
  model.alpha_grid = config.alpha_grid;
  model.chosen_alpha = config.alpha_grid[best_a];
  model.window = window;
  model.num_states = num_states;
  Eigen::MatrixXd w = solve_ridge(gram_total, moment_total, model.chosen_alpha);
  model.weights = w.topRows(d);
  model.intercept = w.row(d);
  return model;
}

std::vector<int> ridge_predict(const RidgeModel& model, const Eigen::MatrixXd& features) {
  if (features.cols() != model.weights.rows())
    throw ShapeError("ridge_predict: features have width " +
                     std::to_string(features.cols()) + ", model expects " +
                     std::to_string(model.weights.rows()));
  Eigen::MatrixXd scores = features * model.weights;
  scores.rowwise() += model.intercept;
  std::vector<int> out(static_cast<std::size_t>(features.rows()));
  for (Index r = 0; r < scores.rows(); ++r) {
    Index arg = 0;
    scores.row(r).maxCoeff(&arg);
    out[static_cast<std::size_t>(r)] = static_cast<int>(arg);
  }
  return out;
}

}  // namespace sigstate::baseline
