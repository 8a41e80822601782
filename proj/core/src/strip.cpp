#include "sigstate/metrics/strip.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace sigstate::metrics {

std::string state_color(int state) {
  int hue = (state * 137) % 360;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "hsl(%d,65%%,55%%)", hue);
  return buf;
}

namespace {

void emit_band(std::ostringstream& svg, const std::vector<int>& labels, Index shown,
               int y, int height) {
  Index run_start = 0;
  for (Index t = 1; t <= shown; ++t) {
    if (t == shown || labels[static_cast<std::size_t>(t)] !=
                          labels[static_cast<std::size_t>(run_start)]) {
      svg << "  <rect x=\"" << run_start << "\" y=\"" << y << "\" width=\""
          << (t - run_start) << "\" height=\"" << height << "\" fill=\""
          << state_color(labels[static_cast<std::size_t>(run_start)]) << "\"/>\n";
      run_start = t;
    }
  }
}

}  // namespace

std::string render_state_strip(const std::vector<int>& truth,
                               const std::vector<int>& predicted,
                               const Eigen::VectorXd& mask, Index max_samples) {
  if (truth.size() != predicted.size())
    throw ShapeError("render_state_strip: sequence lengths differ");
  Index valid = static_cast<Index>(truth.size());
  if (mask.size() != 0) {
    if (mask.size() != static_cast<Index>(truth.size()))
      throw ShapeError("render_state_strip: mask length mismatch");
    valid = 0;
    while (valid < mask.size() && mask(valid) != 0.0) ++valid;
  }
  const Index shown = std::min(valid, max_samples);
  const int band_h = 28, gap = 4;
  const int height = 2 * band_h + gap;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << shown
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << shown << ' ' << height
      << "\">\n";
  if (shown > 0) {
    emit_band(svg, predicted, shown, 0, band_h);
    emit_band(svg, truth, shown, band_h + gap, band_h);
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace sigstate::metrics
