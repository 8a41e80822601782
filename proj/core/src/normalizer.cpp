#include "sigstate/normalizer.hpp"

#include <cmath>

namespace sigstate {

ChannelNormalizer fit_normalizer(std::span<const MultivariateSeries> train_samples) {
  if (train_samples.empty())
    throw ValidationError("fit_normalizer: no training samples");
  const Index n = train_samples.front().num_channels();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(n);
  double count = 0.0;
  for (const auto& s : train_samples) {
    if (s.num_channels() != n)
      throw ShapeError("fit_normalizer: inconsistent channel counts");
    sum += s.values.colwise().sum().transpose();
    sum_sq += s.values.array().square().colwise().sum().matrix().transpose();
    count += static_cast<double>(s.length());
  }
  ChannelNormalizer norm;
  norm.mean = sum / count;
  Eigen::VectorXd variance =
      (sum_sq / count - norm.mean.array().square().matrix()).cwiseMax(0.0);
  norm.stdev = variance.array().sqrt();
  for (Index c = 0; c < n; ++c)
    if (norm.stdev(c) < 1e-12) norm.stdev(c) = 1.0;
  return norm;
}

ChannelNormalizer fit_normalizer(const std::vector<const MultivariateSeries*>& train_samples) {
  std::vector<MultivariateSeries> copies;
  copies.reserve(train_samples.size());
  for (const auto* s : train_samples) copies.push_back(*s);
  return fit_normalizer(std::span<const MultivariateSeries>(copies));
}

MultivariateSeries apply_normalizer(const ChannelNormalizer& norm,
                                    const MultivariateSeries& series) {
  if (norm.num_channels() != series.num_channels())
    throw ShapeError("apply_normalizer: channel count mismatch");
  MultivariateSeries out = series;
  out.values = (series.values.rowwise() - norm.mean.transpose()).array().rowwise() /
               norm.stdev.transpose().array();
  return out;
}

MultivariateSeries invert_normalizer(const ChannelNormalizer& norm,
                                     const MultivariateSeries& series) {
  if (norm.num_channels() != series.num_channels())
    throw ShapeError("invert_normalizer: channel count mismatch");
  MultivariateSeries out = series;
  out.values = (series.values.array().rowwise() * norm.stdev.transpose().array())
                   .matrix()
                   .rowwise() +
               norm.mean.transpose();
  return out;
}

}  // namespace sigstate
