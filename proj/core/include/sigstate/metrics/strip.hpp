#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sigstate/series.hpp"

namespace sigstate::metrics {

using sigstate::Index;

/// Stable color for a state id (golden-angle hue stepping).
std::string state_color(int state);

/// Two-band SVG strip: prediction on top, truth below, time left to right,
/// one color per state id, truncated to max_samples. Masked tail positions
/// are not drawn.
std::string render_state_strip(const std::vector<int>& truth,
                               const std::vector<int>& predicted,
                               const Eigen::VectorXd& mask = Eigen::VectorXd(),
                               Index max_samples = 600);

}  // namespace sigstate::metrics
