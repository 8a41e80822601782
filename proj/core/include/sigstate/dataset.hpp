#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sigstate/normalizer.hpp"
#include "sigstate/series.hpp"

namespace sigstate {

enum class Split { train, validation, test };

std::string to_string(Split split);
Split split_from_string(const std::string& name);

/// One flight: its recorded signals, the (possibly absent) ground-truth
/// annotation and the split it was assigned to.
struct Sample {
  std::string id;
  MultivariateSeries series;
  StateAnnotation annotation;  // empty entries => unlabeled
  Split split = Split::train;

  bool labeled() const { return !annotation.entries.empty(); }
};

struct Dataset {
  std::vector<Sample> samples;
  std::vector<std::string> state_names;  // index == state id
  double sample_rate_hz = 5.0;
  std::optional<ChannelNormalizer> normalizer;

  int num_states() const { return static_cast<int>(state_names.size()); }
  std::vector<const Sample*> by_split(Split split) const;
  const Sample* find(const std::string& id) const;
};

struct LoadOptions {
  Index min_length = 200;
  Index max_length = 20000;
  bool warn_dropped = true;
};

/// Flight file contents: the series plus the optional dense per-sample
/// state column.
struct FlightFile {
  MultivariateSeries series;
  std::optional<std::vector<int>> states;
};

FlightFile read_flight_csv(const std::filesystem::path& path);
void write_flight_csv(const std::filesystem::path& path,
                      const MultivariateSeries& series,
                      const std::vector<int>* states);

/// Reads a manifest (JSON lines: one header object, then one object per
/// flight) and every flight file it references. Samples outside the length
/// bounds are dropped with a warning on stderr.
Dataset load_dataset(const std::filesystem::path& manifest_path,
                     const LoadOptions& options = {});

/// Writes flight CSVs under <out_dir>/flights/ and a manifest.jsonl beside
/// them. Returns the manifest path.
std::filesystem::path save_dataset(const Dataset& dataset,
                                   const std::filesystem::path& out_dir);

/// Deterministically re-assigns split tags. Fractions must be positive and
/// sum to 1; sample counts use largest-remainder rounding with ties broken
/// toward the later split.
Dataset split_dataset(const Dataset& dataset, const std::array<double, 3>& fractions,
                      std::uint64_t seed);

/// Builds the dense per-timestep labels of a labeled sample.
std::vector<int> sample_labels(const Sample& sample);

}  // namespace sigstate
