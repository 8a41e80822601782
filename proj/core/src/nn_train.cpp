#include "sigstate/nn/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "sigstate/nn/adam.hpp"
#include "sigstate/nn/loss.hpp"
#include "sigstate/util.hpp"

namespace sigstate::nn {

namespace {

struct PreparedSample {
  Eigen::MatrixXd input;   // normalized, native length x channels
  Eigen::MatrixXd target;  // one-hot, native length x num_states
  std::vector<int> labels;
  Eigen::VectorXd mask;    // all ones at native length
};

std::vector<PreparedSample> prepare(const std::vector<const Sample*>& samples,
                                    const ChannelNormalizer& norm,
                                    const ArchitectureConfig& arch) {
  std::vector<PreparedSample> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = *samples[i];
    if (!s.labeled())
      throw ValidationError("train: sample '" + s.id + "' has no annotation");
    if (s.series.num_channels() != arch.input_channels)
      throw ShapeError("train: sample '" + s.id + "' has " +
                       std::to_string(s.series.num_channels()) +
                       " channels, config expects " +
                       std::to_string(arch.input_channels));
    if (s.series.length() > arch.max_length)
      throw ValidationError("train: sample '" + s.id + "' longer than max_length " +
                            std::to_string(arch.max_length));
    PreparedSample& p = out[i];
    p.input = apply_normalizer(norm, s.series).values;
    LabelSequence seq = expand_labels(s.annotation, s.series.length());
    p.labels = seq.states;
    p.target = one_hot_encode(seq, arch.num_states);
    p.mask = Eigen::VectorXd::Ones(s.series.length());
  }
  return out;
}

std::vector<Eigen::MatrixXd> snapshot_params(const Network& net) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto* p : net.parameters()) out.push_back(p->value);
  return out;
}

void restore_params(Network& net, const std::vector<Eigen::MatrixXd>& values) {
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = values[i];
}

}  // namespace

TrainResult train(const Dataset& dataset, const ArchitectureConfig& arch,
                  const TrainingConfig& config, int threads) {
  arch.validate();
  config.validate();
  auto train_ptrs = dataset.by_split(Split::train);
  auto val_ptrs = dataset.by_split(Split::validation);
  if (train_ptrs.empty()) throw ValidationError("train: training split is empty");
  if (val_ptrs.empty()) throw ValidationError("train: validation split is empty");

  std::vector<const MultivariateSeries*> train_series;
  for (const auto* s : train_ptrs) train_series.push_back(&s->series);
  ChannelNormalizer norm = fit_normalizer(train_series);

  std::vector<PreparedSample> train_set = prepare(train_ptrs, norm, arch);
  std::vector<PreparedSample> val_set = prepare(val_ptrs, norm, arch);

  Network net(arch);
  net.init_params(mix_seed(config.seed, 0));
  AdamOptimizer adam(config);
  std::mt19937_64 shuffle_rng(mix_seed(config.seed, 1));

  const int workers = resolve_threads(threads);
  const Index n_train = static_cast<Index>(train_set.size());
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  std::vector<Eigen::MatrixXd> best_params = snapshot_params(net);
  double best_val = -1.0;
  int best_epoch = 0;
  int stale_epochs = 0;
  double last_train_loss = 0.0;
  int epochs_run = 0;

  // Per-sample losses/gradients live in slots so the reduction order is
  // fixed no matter how many workers ran.
  struct Slot {
    double loss = 0.0;
    std::vector<Eigen::MatrixXd> grads;
  };

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    epochs_run = epoch;
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double epoch_loss_sum = 0.0;
    for (Index batch_start = 0; batch_start < n_train;
         batch_start += config.batch_size) {
      const Index batch_n =
          std::min<Index>(config.batch_size, n_train - batch_start);
      std::vector<Slot> slots(static_cast<std::size_t>(batch_n));
      std::vector<Network> replicas(static_cast<std::size_t>(
                                        std::min<Index>(workers, batch_n)),
                                    net);
      parallel_for(batch_n, static_cast<int>(replicas.size()), [&](Index b) {
        Network& replica = replicas[static_cast<std::size_t>(
            b % static_cast<Index>(replicas.size()))];
        const PreparedSample& sample =
            train_set[order[static_cast<std::size_t>(batch_start + b)]];
        replica.zero_grads();
        Eigen::MatrixXd probs = replica.forward(sample.input);
        DiceResult loss = dice_loss_with_grad(probs, sample.target, sample.mask);
        replica.backward(loss.grad);
        Slot& slot = slots[static_cast<std::size_t>(b)];
        slot.loss = loss.value;
        for (const auto* p : replica.parameters()) slot.grads.push_back(p->grad);
      });

      net.zero_grads();
      auto params = net.parameters();
      const double inv_batch = 1.0 / static_cast<double>(batch_n);
      double batch_loss = 0.0;
      for (const Slot& slot : slots) {
        batch_loss += slot.loss;
        for (std::size_t k = 0; k < params.size(); ++k)
          params[k]->grad += slot.grads[k];
      }
      for (auto* p : params) p->grad *= inv_batch;
      batch_loss *= inv_batch;
      if (!std::isfinite(batch_loss))
        throw TrainingDiverged("training loss became non-finite at epoch " +
                               std::to_string(epoch));
      epoch_loss_sum += batch_loss * static_cast<double>(batch_n);
      adam.step(params);
    }
    last_train_loss = epoch_loss_sum / static_cast<double>(n_train);

    for (const auto* p : net.parameters())
      if (!p->value.allFinite())
        throw TrainingDiverged("parameter '" + p->name +
                               "' became non-finite at epoch " +
                               std::to_string(epoch));

    // Masked timestep accuracy pooled over the validation split.
    std::vector<std::pair<double, double>> val_counts(val_set.size());
    {
      std::vector<Network> replicas(
          static_cast<std::size_t>(
              std::min<Index>(workers, static_cast<Index>(val_set.size()))),
          net);
      parallel_for(static_cast<Index>(val_set.size()),
                   static_cast<int>(replicas.size()), [&](Index i) {
                     Network& replica = replicas[static_cast<std::size_t>(
                         i % static_cast<Index>(replicas.size()))];
                     const PreparedSample& sample =
                         val_set[static_cast<std::size_t>(i)];
                     Eigen::MatrixXd probs = replica.forward(sample.input);
                     std::vector<int> pred = argmax_decode(probs);
                     double correct = 0.0;
                     for (std::size_t t = 0; t < pred.size(); ++t)
                       if (pred[t] == sample.labels[t]) correct += 1.0;
                     val_counts[static_cast<std::size_t>(i)] = {
                         correct, static_cast<double>(pred.size())};
                   });
    }
    double correct = 0.0, total = 0.0;
    for (const auto& [c, n] : val_counts) {
      correct += c;
      total += n;
    }
    const double val_accuracy = total > 0.0 ? correct / total : 0.0;

    result.history.push_back({epoch, last_train_loss, val_accuracy});

    if (val_accuracy > best_val) {
      best_val = val_accuracy;
      best_epoch = epoch;
      best_params = snapshot_params(net);
      stale_epochs = 0;
    } else {
      ++stale_epochs;
      if (stale_epochs >= config.patience) break;
    }
  }

  restore_params(net, best_params);
  TrainingMeta meta;
  meta.epochs_run = epochs_run;
  meta.best_epoch = best_epoch;
  meta.best_val_accuracy = best_val;
  meta.final_train_loss = last_train_loss;
  meta.seed = config.seed;
  result.checkpoint = checkpoint_from_network(net, norm, meta);
  return result;
}

void write_history_csv(const std::vector<EpochStats>& history,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write history: " + path.string());
  out << "epoch,train_loss,val_accuracy\n";
  char buf[64];
  for (const auto& e : history) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g", e.epoch, e.train_loss,
                  e.val_accuracy);
    out << buf << '\n';
  }
}

std::vector<EpochStats> read_history_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open history: " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<EpochStats> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EpochStats e;
    if (std::sscanf(line.c_str(), "%d,%lg,%lg", &e.epoch, &e.train_loss,
                    &e.val_accuracy) != 3)
      throw ParseError(path.string(), static_cast<long>(out.size() + 2),
                       "bad history row");
    out.push_back(e);
  }
  return out;
}

}  // namespace sigstate::nn
