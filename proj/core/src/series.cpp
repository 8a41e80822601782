#include "sigstate/series.hpp"

#include <algorithm>

namespace sigstate {

void MultivariateSeries::validate() const {
  if (num_channels() < 2)
    throw ValidationError("series must have at least 2 channels, got " +
                          std::to_string(num_channels()));
  if (length() < 1) throw ValidationError("series must have at least 1 sample");
  if (!(sample_rate_hz > 0.0))
    throw ValidationError("sample_rate_hz must be positive");
  if (!channel_names.empty() &&
      static_cast<Index>(channel_names.size()) != num_channels())
    throw ValidationError("channel_names size does not match channel count");
}

void StateAnnotation::validate(Index series_length) const {
  if (entries.empty()) throw ValidationError("annotation has no entries");
  if (entries.front().t != 0)
    throw ValidationError("annotation must record the initial state at t=0");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Entry& e = entries[i];
    if (e.t < 0 || e.t >= series_length)
      throw ValidationError("annotation timestamp " + std::to_string(e.t) +
                            " out of range [0, " + std::to_string(series_length) + ")");
    if (e.state < 0 || e.state >= num_states)
      throw ValidationError("state id " + std::to_string(e.state) +
                            " out of range [0, " + std::to_string(num_states) + ")");
    if (i > 0) {
      if (entries[i - 1].t >= e.t)
        throw ValidationError("annotation timestamps must be strictly increasing");
      if (entries[i - 1].state == e.state)
        throw ValidationError("consecutive annotation entries must change state");
    }
  }
}

int StateAnnotation::state_at(Index t) const {
  if (entries.empty()) throw ValidationError("annotation has no entries");
  // Last entry with timestamp <= t.
  auto it = std::upper_bound(
      entries.begin(), entries.end(), t,
      [](Index value, const Entry& e) { return value < e.t; });
  if (it == entries.begin())
    throw ValidationError("no annotation entry at or before t=" + std::to_string(t));
  return std::prev(it)->state;
}

std::vector<Index> change_timestamps(const StateAnnotation& annotation) {
  std::vector<Index> out;
  out.reserve(annotation.entries.size());
  for (const auto& e : annotation.entries)
    if (e.t > 0) out.push_back(e.t);
  return out;
}

}  // namespace sigstate
