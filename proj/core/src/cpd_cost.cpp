#include "sigstate/cpd/cost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sigstate::cpd {

std::string to_string(CostKind kind) {
  switch (kind) {
    case CostKind::l1: return "l1";
    case CostKind::l2: return "l2";
    case CostKind::normal: return "normal";
    case CostKind::linear: return "linear";
    case CostKind::rbf: return "rbf";
    case CostKind::rank: return "rank";
    case CostKind::ar: return "ar";
  }
  return "l2";
}

CostKind cost_kind_from_string(const std::string& name) {
  if (name == "l1") return CostKind::l1;
  if (name == "l2") return CostKind::l2;
  if (name == "normal") return CostKind::normal;
  if (name == "linear") return CostKind::linear;
  if (name == "rbf") return CostKind::rbf;
  if (name == "rank") return CostKind::rank;
  if (name == "ar") return CostKind::ar;
  throw ValidationError("unknown cost kind: " + name);
}

Index SegmentCostModel::min_size(Index num_channels) const {
  switch (kind) {
    case CostKind::l1:
    case CostKind::l2:
      return 1;
    case CostKind::normal:
    case CostKind::rbf:
    case CostKind::rank:
      return 2;
    case CostKind::linear: {
      Index n_cov = covariates.empty() ? num_channels / 2
                                       : static_cast<Index>(covariates.size());
      return n_cov + 2;
    }
    case CostKind::ar:
      return static_cast<Index>(ar_order) + 2;
  }
  return 1;
}

namespace {

// Packed upper-triangle index for a symmetric n x n accumulation.
inline Index packed_index(Index i, Index j, Index n) {
  // requires i <= j
  return i * n - i * (i - 1) / 2 + (j - i);
}

Eigen::VectorXd average_ranks(const Eigen::VectorXd& column) {
  const Index l = column.size();
  std::vector<Index> order(static_cast<std::size_t>(l));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return column(a) < column(b); });
  Eigen::VectorXd ranks(l);
  Index i = 0;
  while (i < l) {
    Index j = i;
    while (j + 1 < l && column(order[static_cast<std::size_t>(j + 1)]) ==
                            column(order[static_cast<std::size_t>(i)]))
      ++j;
    // 1-based ranks; ties share the average rank of their run.
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (Index k = i; k <= j; ++k)
      ranks(order[static_cast<std::size_t>(k)]) = avg;
    i = j + 1;
  }
  return ranks;
}

double median_pairwise_sq_distance(const Eigen::MatrixXd& signal) {
  const Index l = signal.rows();
  std::vector<double> d2;
  const Index max_pairs = 1000;
  if (l * (l - 1) / 2 <= max_pairs) {
    for (Index i = 0; i < l; ++i)
      for (Index j = i + 1; j < l; ++j)
        d2.push_back((signal.row(i) - signal.row(j)).squaredNorm());
  } else {
    std::mt19937_64 rng(0xC0FFEEull);
    std::uniform_int_distribution<Index> pick(0, l - 1);
    d2.reserve(max_pairs);
    while (static_cast<Index>(d2.size()) < max_pairs) {
      Index i = pick(rng), j = pick(rng);
      if (i == j) continue;
      d2.push_back((signal.row(i) - signal.row(j)).squaredNorm());
    }
  }
  if (d2.empty()) return 0.0;
  std::size_t mid = d2.size() / 2;
  std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(mid), d2.end());
  return d2[mid];
}

}  // namespace

CostEvaluator::CostEvaluator(SegmentCostModel model, Eigen::MatrixXd signal)
    : model_(std::move(model)), signal_(std::move(signal)) {
  const Index l = signal_.rows();
  const Index n = signal_.cols();
  if (l < 1 || n < 1) throw ValidationError("cost evaluator needs a non-empty signal");
  min_size_ = model_.min_size(n);

  switch (model_.kind) {
    case CostKind::l2: {
      prefix_sum_.setZero(l + 1, n);
      prefix_sq_.setZero(l + 1, n);
      for (Index t = 0; t < l; ++t) {
        prefix_sum_.row(t + 1) = prefix_sum_.row(t) + signal_.row(t);
        prefix_sq_.row(t + 1) =
            prefix_sq_.row(t) + signal_.row(t).array().square().matrix();
      }
      break;
    }
    case CostKind::normal: {
      prefix_sum_.setZero(l + 1, n);
      prefix_outer_.setZero(l + 1, n * (n + 1) / 2);
      for (Index t = 0; t < l; ++t) {
        prefix_sum_.row(t + 1) = prefix_sum_.row(t) + signal_.row(t);
        prefix_outer_.row(t + 1) = prefix_outer_.row(t);
        for (Index i = 0; i < n; ++i)
          for (Index j = i; j < n; ++j)
            prefix_outer_(t + 1, packed_index(i, j, n)) += signal_(t, i) * signal_(t, j);
      }
      break;
    }
    case CostKind::linear: {
      covariates_ = model_.covariates;
      if (covariates_.empty())
        for (Index c = 0; c < n / 2; ++c) covariates_.push_back(c);
      for (Index c : covariates_)
        if (c < 0 || c >= n)
          throw ValidationError("linear cost: covariate index out of range");
      for (Index c = 0; c < n; ++c)
        if (std::find(covariates_.begin(), covariates_.end(), c) == covariates_.end())
          responses_.push_back(c);
      if (responses_.empty())
        throw ValidationError("linear cost: no response channels left");
      const Index d = static_cast<Index>(covariates_.size()) + 1 +
                      static_cast<Index>(responses_.size());
      lin_prefix_.setZero(l + 1, d * (d + 1) / 2);
      Eigen::VectorXd z(d);
      for (Index t = 0; t < l; ++t) {
        Index pos = 0;
        for (Index c : covariates_) z(pos++) = signal_(t, c);
        z(pos++) = 1.0;
        for (Index c : responses_) z(pos++) = signal_(t, c);
        lin_prefix_.row(t + 1) = lin_prefix_.row(t);
        for (Index i = 0; i < d; ++i)
          for (Index j = i; j < d; ++j)
            lin_prefix_(t + 1, packed_index(i, j, d)) += z(i) * z(j);
      }
      break;
    }
    case CostKind::rbf: {
      if (model_.rbf_gamma > 0.0) {
        rbf_gamma_ = model_.rbf_gamma;
      } else {
        double med = median_pairwise_sq_distance(signal_);
        rbf_gamma_ = med > 0.0 ? 1.0 / med : 1.0;
      }
      break;
    }
    case CostKind::rank: {
      Eigen::MatrixXd centered(l, n);
      const double mid = 0.5 * static_cast<double>(l + 1);
      for (Index c = 0; c < n; ++c)
        centered.col(c) = average_ranks(signal_.col(c)).array() - mid;
      Eigen::MatrixXd cov =
          centered.transpose() * centered / static_cast<double>(l);
      cov.diagonal().array() += model_.cov_ridge * static_cast<double>(l * l);
      rank_inv_cov_ = cov.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
      rank_prefix_.setZero(l + 1, n);
      for (Index t = 0; t < l; ++t)
        rank_prefix_.row(t + 1) = rank_prefix_.row(t) + centered.row(t);
      break;
    }
    case CostKind::l1:
    case CostKind::ar:
      break;
  }
}

double CostEvaluator::cost(Index a, Index b) const {
  const Index l = signal_.rows();
  if (a < 0 || b > l || a >= b)
    throw ValidationError("segment [" + std::to_string(a) + ", " + std::to_string(b) +
                          ") out of range for signal of length " + std::to_string(l));
  if (b - a < min_size_)
    throw ValidationError("segment [" + std::to_string(a) + ", " + std::to_string(b) +
                          ") shorter than min_size " + std::to_string(min_size_));
  switch (model_.kind) {
    case CostKind::l1: return cost_l1(a, b);
    case CostKind::l2: return cost_l2(a, b);
    case CostKind::normal: return cost_normal(a, b);
    case CostKind::linear: return cost_linear(a, b);
    case CostKind::rbf: return cost_rbf(a, b);
    case CostKind::rank: return cost_rank(a, b);
    case CostKind::ar: return cost_ar(a, b);
  }
  return 0.0;
}

double CostEvaluator::cost_l1(Index a, Index b) const {
  const Index len = b - a;
  double total = 0.0;
  std::vector<double> buf(static_cast<std::size_t>(len));
  for (Index c = 0; c < signal_.cols(); ++c) {
    for (Index t = 0; t < len; ++t)
      buf[static_cast<std::size_t>(t)] = signal_(a + t, c);
    auto mid = buf.begin() + static_cast<std::ptrdiff_t>(len / 2);
    std::nth_element(buf.begin(), mid, buf.end());
    double median = *mid;
    if (len % 2 == 0) {
      // lower median complement for an even count
      double lower = *std::max_element(buf.begin(), mid);
      median = 0.5 * (median + lower);
    }
    for (Index t = 0; t < len; ++t)
      total += std::abs(signal_(a + t, c) - median);
  }
  return total;
}

double CostEvaluator::cost_l2(Index a, Index b) const {
  const double len = static_cast<double>(b - a);
  Eigen::RowVectorXd s = prefix_sum_.row(b) - prefix_sum_.row(a);
  Eigen::RowVectorXd sq = prefix_sq_.row(b) - prefix_sq_.row(a);
  // sum (x - mean)^2 = sum x^2 - len * mean^2, per channel
  double total = sq.sum() - s.array().square().sum() / len;
  return std::max(total, 0.0);
}

double CostEvaluator::cost_normal(Index a, Index b) const {
  const Index n = signal_.cols();
  const double len = static_cast<double>(b - a);
  Eigen::VectorXd mean = (prefix_sum_.row(b) - prefix_sum_.row(a)).transpose() / len;
  Eigen::MatrixXd cov(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) {
      double sij = prefix_outer_(b, packed_index(i, j, n)) -
                   prefix_outer_(a, packed_index(i, j, n));
      double v = sij / len - mean(i) * mean(j);
      cov(i, j) = v;
      cov(j, i) = v;
    }
  cov.diagonal().array() += model_.cov_ridge;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  double logdet = 0.0;
  for (Index i = 0; i < n; ++i)
    logdet += std::log(std::max(es.eigenvalues()(i), 1e-300));
  return len * logdet;
}

double CostEvaluator::cost_linear(Index a, Index b) const {
  const Index n_cov = static_cast<Index>(covariates_.size()) + 1;  // + intercept
  const Index n_resp = static_cast<Index>(responses_.size());
  const Index d = n_cov + n_resp;
  Eigen::MatrixXd gram(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) {
      double v = lin_prefix_(b, packed_index(i, j, d)) -
                 lin_prefix_(a, packed_index(i, j, d));
      gram(i, j) = v;
      gram(j, i) = v;
    }
  Eigen::MatrixXd xtx = gram.topLeftCorner(n_cov, n_cov);
  Eigen::MatrixXd xty = gram.topRightCorner(n_cov, n_resp);
  Eigen::MatrixXd yty = gram.bottomRightCorner(n_resp, n_resp);
  Eigen::MatrixXd w = xtx.completeOrthogonalDecomposition().solve(xty);
  double rss = yty.trace() - (xty.array() * w.array()).sum();
  return std::max(rss, 0.0);
}

double CostEvaluator::cost_rbf(Index a, Index b) const {
  const Index len = b - a;
  // sum_t k(x_t, x_t) = len for a Gaussian kernel
  double s = static_cast<double>(len);  // diagonal terms of the Gram sum
  double off = 0.0;
  for (Index t = a; t < b; ++t)
    for (Index u = t + 1; u < b; ++u)
      off += std::exp(-rbf_gamma_ * (signal_.row(t) - signal_.row(u)).squaredNorm());
  double gram_sum = s + 2.0 * off;
  return static_cast<double>(len) - gram_sum / static_cast<double>(len);
}

double CostEvaluator::cost_rank(Index a, Index b) const {
  const double len = static_cast<double>(b - a);
  Eigen::VectorXd s = (rank_prefix_.row(b) - rank_prefix_.row(a)).transpose();
  // Mahalanobis spread of the segment's mean rank; negated so that merging
  // distinct regimes raises the total cost.
  return -(s.dot(rank_inv_cov_ * s)) / len;
}

double CostEvaluator::cost_ar(Index a, Index b) const {
  const Index p = static_cast<Index>(model_.ar_order);
  const Index m = p + 2;  // [1, lags..., y]
  double total = 0.0;
  Eigen::MatrixXd gram(m, m);
  Eigen::VectorXd z(m);
  for (Index c = 0; c < signal_.cols(); ++c) {
    gram.setZero();
    for (Index t = a + p; t < b; ++t) {
      z(0) = 1.0;
      for (Index k = 0; k < p; ++k) z(k + 1) = signal_(t - 1 - k, c);
      z(m - 1) = signal_(t, c);
      gram.selfadjointView<Eigen::Lower>().rankUpdate(z);
    }
    gram = gram.selfadjointView<Eigen::Lower>();
    Eigen::MatrixXd xtx = gram.topLeftCorner(m - 1, m - 1);
    Eigen::VectorXd xty = gram.row(m - 1).head(m - 1).transpose();
    double yty = gram(m - 1, m - 1);
    Eigen::VectorXd w = xtx.completeOrthogonalDecomposition().solve(xty);
    total += std::max(yty - xty.dot(w), 0.0);
  }
  return total;
}

double segment_cost(const SegmentCostModel& model, const Eigen::MatrixXd& signal,
                    Index a, Index b) {
  return CostEvaluator(model, signal).cost(a, b);
}

}  // namespace sigstate::cpd
