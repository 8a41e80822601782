#include "sigstate/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "sigstate/encoding.hpp"
#include "sigstate/util.hpp"

namespace sigstate {

using nlohmann::json;

std::string to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "train";
}

Split split_from_string(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "validation" || name == "val") return Split::validation;
  if (name == "test") return Split::test;
  throw ValidationError("unknown split tag: " + name);
}

std::vector<const Sample*> Dataset::by_split(Split split) const {
  std::vector<const Sample*> out;
  for (const auto& s : samples)
    if (s.split == split) out.push_back(&s);
  return out;
}

const Sample* Dataset::find(const std::string& id) const {
  for (const auto& s : samples)
    if (s.id == id) return &s;
  return nullptr;
}

namespace {

double parse_double(std::string_view token, const std::string& path, long line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(path, line, "bad numeric value '" + std::string(token) + "'");
  return v;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

}  // namespace

FlightFile read_flight_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open flight file: " + path.string());
  const std::string path_str = path.string();

  std::string line;
  long line_no = 0;
  if (!std::getline(in, line)) throw ParseError(path_str, 1, "empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();

  auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "t")
    throw ParseError(path_str, 1, "header must start with 't' and name at least one channel");
  bool has_state = header.back() == "state";
  std::size_t n_channels = header.size() - 1 - (has_state ? 1 : 0);
  if (n_channels < 1) throw ParseError(path_str, 1, "no channel columns");

  FlightFile out;
  out.series.channel_names.assign(header.begin() + 1,
                                  header.begin() + 1 + n_channels);
  if (has_state) out.states.emplace();

  std::vector<double> values;
  std::vector<int> states;
  Index rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tokens = split_csv_line(line);
    if (tokens.size() != header.size())
      throw ParseError(path_str, line_no,
                       "expected " + std::to_string(header.size()) + " columns, got " +
                           std::to_string(tokens.size()));
    for (std::size_t c = 1; c <= n_channels; ++c)
      values.push_back(parse_double(tokens[c], path_str, line_no));
    if (has_state) {
      double s = parse_double(tokens.back(), path_str, line_no);
      states.push_back(static_cast<int>(s));
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(path_str, line_no, "flight file has no data rows");

  out.series.values.resize(rows, static_cast<Index>(n_channels));
  for (Index t = 0; t < rows; ++t)
    for (Index c = 0; c < static_cast<Index>(n_channels); ++c)
      out.series.values(t, c) =
          values[static_cast<std::size_t>(t) * n_channels + static_cast<std::size_t>(c)];
  if (has_state) *out.states = std::move(states);
  return out;
}

void write_flight_csv(const std::filesystem::path& path,
                      const MultivariateSeries& series,
                      const std::vector<int>* states) {
  if (states && static_cast<Index>(states->size()) != series.length())
    throw ShapeError("write_flight_csv: state column length mismatch");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write flight file: " + path.string());
  out << "t";
  for (Index c = 0; c < series.num_channels(); ++c) {
    out << ',';
    if (static_cast<std::size_t>(c) < series.channel_names.size())
      out << series.channel_names[static_cast<std::size_t>(c)];
    else
      out << "ch" << c;
  }
  if (states) out << ",state";
  out << '\n';

  char buf[32];
  for (Index t = 0; t < series.length(); ++t) {
    out << t;
    for (Index c = 0; c < series.num_channels(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", series.values(t, c));
      out << ',' << buf;
    }
    if (states) out << ',' << (*states)[static_cast<std::size_t>(t)];
    out << '\n';
  }
  if (!out) throw IoError("failed writing flight file: " + path.string());
}

namespace {

StateAnnotation annotation_from_dense(const std::vector<int>& states, int num_states) {
  StateAnnotation ann;
  ann.num_states = num_states;
  if (states.empty()) return ann;
  ann.entries.push_back({0, states[0]});
  for (std::size_t t = 1; t < states.size(); ++t)
    if (states[t] != states[t - 1])
      ann.entries.push_back({static_cast<Index>(t), states[t]});
  return ann;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& manifest_path,
                     const LoadOptions& options) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("cannot open manifest: " + manifest_path.string());
  const std::string path_str = manifest_path.string();
  const auto base_dir = manifest_path.parent_path();

  Dataset ds;
  bool saw_header = false;
  std::string line;
  long line_no = 0;
  Index dropped = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(path_str, line_no, e.what());
    }
    const std::string kind = j.value("kind", "");
    if (kind == "header") {
      saw_header = true;
      ds.sample_rate_hz = j.value("sample_rate_hz", 5.0);
      ds.state_names = j.value("state_names", std::vector<std::string>{});
      if (j.contains("normalizer")) {
        const auto& n = j["normalizer"];
        ChannelNormalizer norm;
        std::vector<double> mean = n.value("mean", std::vector<double>{});
        std::vector<double> stdev = n.value("stdev", std::vector<double>{});
        if (mean.size() != stdev.size())
          throw ParseError(path_str, line_no, "normalizer mean/stdev size mismatch");
        norm.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(),
                                                      static_cast<Index>(mean.size()));
        norm.stdev = Eigen::Map<const Eigen::VectorXd>(
            stdev.data(), static_cast<Index>(stdev.size()));
        ds.normalizer = std::move(norm);
      }
    } else if (kind == "flight") {
      if (!saw_header)
        throw ParseError(path_str, line_no, "flight entry before header");
      if (!j.contains("path"))
        throw ParseError(path_str, line_no, "flight entry missing 'path'");
      const std::string rel = j["path"].get<std::string>();
      Sample sample;
      sample.split = split_from_string(j.value("split", "train"));
      auto flight_path = base_dir / rel;
      FlightFile flight = read_flight_csv(flight_path);
      if (flight.series.length() < options.min_length ||
          flight.series.length() > options.max_length) {
        ++dropped;
        if (options.warn_dropped)
          std::cerr << "[warn] dropping " << rel << ": length "
                    << flight.series.length() << " outside ["
                    << options.min_length << ", " << options.max_length << "]\n";
        continue;
      }
      sample.id = flight_path.stem().string();
      sample.series = std::move(flight.series);
      sample.series.sample_rate_hz = ds.sample_rate_hz;
      if (flight.states)
        sample.annotation = annotation_from_dense(*flight.states, ds.num_states());
      ds.samples.push_back(std::move(sample));
    } else {
      throw ParseError(path_str, line_no, "unknown manifest entry kind '" + kind + "'");
    }
  }
  if (!saw_header) throw ParseError(path_str, line_no, "manifest has no header line");
  if (ds.samples.empty())
    throw ValidationError("dataset is empty after loading " + path_str +
                          " (dropped " + std::to_string(dropped) + ")");
  return ds;
}

std::filesystem::path save_dataset(const Dataset& dataset,
                                   const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "flights");
  const auto manifest_path = out_dir / "manifest.jsonl";
  std::ofstream out(manifest_path);
  if (!out) throw IoError("cannot write manifest: " + manifest_path.string());

  json header;
  header["kind"] = "header";
  header["sample_rate_hz"] = dataset.sample_rate_hz;
  header["state_names"] = dataset.state_names;
  if (dataset.normalizer) {
    const auto& n = *dataset.normalizer;
    header["normalizer"] = {
        {"mean", std::vector<double>(n.mean.data(), n.mean.data() + n.mean.size())},
        {"stdev",
         std::vector<double>(n.stdev.data(), n.stdev.data() + n.stdev.size())}};
  }
  out << header.dump() << '\n';

  char name[64];
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    const Sample& s = dataset.samples[i];
    std::string stem = s.id;
    if (stem.empty()) {
      std::snprintf(name, sizeof(name), "f%05zu", i);
      stem = name;
    }
    const std::string rel = "flights/" + stem + ".csv";
    std::optional<std::vector<int>> states;
    if (s.labeled()) states = sample_labels(s);
    write_flight_csv(out_dir / rel, s.series, states ? &*states : nullptr);
    json j;
    j["kind"] = "flight";
    j["path"] = rel;
    j["split"] = to_string(s.split);
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("failed writing manifest: " + manifest_path.string());
  return manifest_path;
}

Dataset split_dataset(const Dataset& dataset, const std::array<double, 3>& fractions,
                      std::uint64_t seed) {
  double total = fractions[0] + fractions[1] + fractions[2];
  for (double f : fractions)
    if (!(f >= 0.0)) throw ValidationError("split fractions must be non-negative");
  if (std::abs(total - 1.0) > 1e-9)
    throw ValidationError("split fractions must sum to 1");

  const std::size_t n = dataset.samples.size();
  // Largest-remainder apportionment; remainder ties go to the later split.
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainders{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double quota = fractions[static_cast<std::size_t>(i)] * static_cast<double>(n);
    counts[static_cast<std::size_t>(i)] = static_cast<std::size_t>(std::floor(quota));
    remainders[static_cast<std::size_t>(i)] =
        quota - std::floor(quota);
    assigned += counts[static_cast<std::size_t>(i)];
  }
  std::array<int, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (remainders[static_cast<std::size_t>(a)] != remainders[static_cast<std::size_t>(b)])
      return remainders[static_cast<std::size_t>(a)] > remainders[static_cast<std::size_t>(b)];
    return a > b;
  });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned)
    ++counts[static_cast<std::size_t>(order[k % 3])];

  std::vector<std::size_t> indices(n);
  std::iota(indices.begin(), indices.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(indices.begin(), indices.end(), rng);

  Dataset out = dataset;
  for (std::size_t k = 0; k < n; ++k) {
    Split split = Split::train;
    if (k >= counts[0] && k < counts[0] + counts[1]) split = Split::validation;
    if (k >= counts[0] + counts[1]) split = Split::test;
    out.samples[indices[k]].split = split;
  }
  return out;
}

std::vector<int> sample_labels(const Sample& sample) {
  LabelSequence seq = expand_labels(sample.annotation, sample.series.length());
  return seq.states;
}

}  // namespace sigstate
