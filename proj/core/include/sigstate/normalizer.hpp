#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sigstate/series.hpp"

namespace sigstate {

/// Per-channel standardization statistics. Fitted on training samples only;
/// channels without variance keep a unit scale so they map to zero.
struct ChannelNormalizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd stdev;

  Index num_channels() const { return mean.size(); }
};

/// Population mean/std per channel over the concatenation of all samples.
ChannelNormalizer fit_normalizer(std::span<const MultivariateSeries> train_samples);
ChannelNormalizer fit_normalizer(const std::vector<const MultivariateSeries*>& train_samples);

/// (x - mean) / stdev, column-wise.
MultivariateSeries apply_normalizer(const ChannelNormalizer& norm,
                                    const MultivariateSeries& series);

/// x * stdev + mean; inverse of apply_normalizer.
MultivariateSeries invert_normalizer(const ChannelNormalizer& norm,
                                     const MultivariateSeries& series);

}  // namespace sigstate
