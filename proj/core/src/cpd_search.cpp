#include "sigstate/cpd/search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "sigstate/normalizer.hpp"

namespace sigstate::cpd {

std::string to_string(SearchMethod method) {
  return method == SearchMethod::bottom_up ? "bottomup" : "window";
}

SearchMethod search_method_from_string(const std::string& name) {
  if (name == "bottomup" || name == "bottom_up") return SearchMethod::bottom_up;
  if (name == "window") return SearchMethod::window;
  throw ValidationError("unknown search method: " + name);
}

std::vector<Index> initial_grid(Index length, Index jump, Index min_size) {
  if (jump < 1) throw ValidationError("jump must be >= 1");
  Index spacing = jump;
  if (min_size > jump) spacing = jump * ((min_size + jump - 1) / jump);
  std::vector<Index> grid;
  for (Index b = spacing; b + min_size <= length; b += spacing) grid.push_back(b);
  return grid;
}

BottomUpTrajectory bottom_up_trajectory(const CostEvaluator& cost, Index jump,
                                        Index min_size) {
  const Index l = cost.length();
  min_size = std::max(min_size, cost.min_size());
  if (l < 2 * min_size)
    throw ValidationError("signal of length " + std::to_string(l) +
                          " too short for bottom-up with min_size " +
                          std::to_string(min_size));

  BottomUpTrajectory traj;
  traj.grid = initial_grid(l, jump, min_size);
  if (traj.grid.empty()) return traj;

  // Boundary list 0 = b_0 < b_1 < ... < b_m < b_{m+1} = l as a doubly linked
  // list over indices into `bounds`; interior nodes are removable.
  std::vector<Index> bounds;
  bounds.push_back(0);
  bounds.insert(bounds.end(), traj.grid.begin(), traj.grid.end());
  bounds.push_back(l);
  const std::size_t m = bounds.size();
  std::vector<std::size_t> prev(m), next(m);
  for (std::size_t i = 0; i < m; ++i) {
    prev[i] = i == 0 ? i : i - 1;
    next[i] = i + 1 == m ? i : i + 1;
  }

  // seg_cost[i] = cost of the segment starting at bounds[i]
  std::vector<double> seg_cost(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i)
    seg_cost[i] = cost.cost(bounds[i], bounds[i + 1]);

  // Candidate merge gains keyed (gain, breakpoint) for deterministic
  // smallest-index tie-breaking.
  std::set<std::pair<double, Index>> queue;
  std::vector<double> gain(m, 0.0);
  auto compute_gain = [&](std::size_t i) {
    std::size_t p = prev[i], q = next[i];
    double merged = cost.cost(bounds[p], bounds[q]);
    return merged - seg_cost[p] - seg_cost[i];
  };
  for (std::size_t i = 1; i + 1 < m; ++i) {
    gain[i] = compute_gain(i);
    queue.insert({gain[i], bounds[i]});
  }

  std::map<Index, std::size_t> by_bp;
  for (std::size_t i = 1; i + 1 < m; ++i) by_bp[bounds[i]] = i;

  while (!queue.empty()) {
    auto [g, bp] = *queue.begin();
    queue.erase(queue.begin());
    std::size_t i = by_bp.at(bp);
    traj.removals.push_back({bp, g});
    by_bp.erase(bp);

    std::size_t p = prev[i], q = next[i];
    seg_cost[p] = seg_cost[p] + seg_cost[i] + g;  // cost of the merged segment
    next[p] = q;
    prev[q] = p;

    if (bounds[p] != 0) {
      queue.erase({gain[p], bounds[p]});
      gain[p] = compute_gain(p);
      queue.insert({gain[p], bounds[p]});
    }
    if (bounds[q] != l) {
      queue.erase({gain[q], bounds[q]});
      gain[q] = compute_gain(q);
      queue.insert({gain[q], bounds[q]});
    }
  }
  return traj;
}

SegmentationResult apply_penalty(const BottomUpTrajectory& trajectory,
                                 const CostEvaluator& cost, double penalty) {
  std::set<Index> kept(trajectory.grid.begin(), trajectory.grid.end());
  for (const auto& r : trajectory.removals) {
    if (r.gain >= penalty) break;  // first merge at or above the penalty stops
    kept.erase(r.breakpoint);
  }
  SegmentationResult out;
  out.breakpoints.assign(kept.begin(), kept.end());
  Index a = 0;
  for (Index b : out.breakpoints) {
    out.total_cost += cost.cost(a, b);
    a = b;
  }
  out.total_cost += cost.cost(a, cost.length());
  out.objective =
      out.total_cost + penalty * static_cast<double>(out.breakpoints.size());
  return out;
}

SegmentationResult bottom_up(const Eigen::MatrixXd& signal,
                             const SegmentCostModel& model, double penalty,
                             Index jump, Index min_size) {
  if (penalty < 0.0) throw ValidationError("penalty must be >= 0");
  CostEvaluator cost(model, signal);
  BottomUpTrajectory traj = bottom_up_trajectory(cost, jump, min_size);
  return apply_penalty(traj, cost, penalty);
}

SegmentationResult window_based(const Eigen::MatrixXd& signal,
                                const SegmentCostModel& model, double penalty,
                                Index width) {
  if (penalty < 0.0) throw ValidationError("penalty must be >= 0");
  if (width % 2 != 0) throw ValidationError("window width must be even");
  CostEvaluator cost(model, signal);
  const Index l = cost.length();
  const Index half = width / 2;
  if (width < 2 * cost.min_size())
    throw ValidationError("window width " + std::to_string(width) +
                          " below 2*min_size " + std::to_string(2 * cost.min_size()));
  if (l < width)
    throw ValidationError("signal of length " + std::to_string(l) +
                          " shorter than window " + std::to_string(width));

  const Index first = half, last = l - half;
  std::vector<double> disc(static_cast<std::size_t>(last - first + 1));
  for (Index t = first; t <= last; ++t)
    disc[static_cast<std::size_t>(t - first)] =
        cost.cost(t - half, t + half) - cost.cost(t - half, t) - cost.cost(t, t + half);

  // Candidates above the penalty, strongest first; suppress within w/2.
  std::vector<Index> order;
  for (Index t = first; t <= last; ++t)
    if (disc[static_cast<std::size_t>(t - first)] > penalty) order.push_back(t);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    double da = disc[static_cast<std::size_t>(a - first)];
    double db = disc[static_cast<std::size_t>(b - first)];
    if (da != db) return da > db;
    return a < b;
  });
  std::vector<Index> picked;
  for (Index t : order) {
    bool suppressed = false;
    for (Index s : picked)
      if (std::abs(s - t) <= half) {
        suppressed = true;
        break;
      }
    if (!suppressed) picked.push_back(t);
  }
  std::sort(picked.begin(), picked.end());

  SegmentationResult out;
  out.breakpoints = std::move(picked);
  Index a = 0;
  for (Index b : out.breakpoints) {
    out.total_cost += cost.cost(a, b);
    a = b;
  }
  out.total_cost += cost.cost(a, l);
  out.objective =
      out.total_cost + penalty * static_cast<double>(out.breakpoints.size());
  return out;
}

std::vector<Index> detect(const MultivariateSeries& series, const DetectConfig& config) {
  Eigen::MatrixXd signal = series.values;
  if (config.normalize) {
    ChannelNormalizer norm = fit_normalizer({&series, 1});
    signal = apply_normalizer(norm, series).values;
  }
  SegmentationResult result =
      config.search == SearchMethod::bottom_up
          ? bottom_up(signal, config.cost, config.penalty, config.jump)
          : window_based(signal, config.cost, config.penalty, config.width);
  return result.breakpoints;
}

}  // namespace sigstate::cpd
