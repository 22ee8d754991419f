// Copyright 2026 The hinpair Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hinpair/train.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hinpair/errors.h"
#include "hinpair/metrics.h"
#include "hinpair/rng.h"

namespace hinpair {

namespace {

constexpr std::uint64_t kShuffleSalt = 2;
constexpr std::uint64_t kDropoutSalt = 3;
constexpr std::uint64_t kSplitSalt = 4;
constexpr std::uint64_t kTrainPairSalt = 5;
constexpr std::uint64_t kValPairSalt = 6;

void require_finite(const ParameterStore<float> &store) {
  for (std::size_t i = 0; i < store.size(); ++i) {
    for (float v : store.tensors()[i].values()) {
      if (!std::isfinite(v)) throw NumericalError("parameter " + store.names()[i] + " diverged");
    }
  }
}

void copy_values(const ParameterStore<float> &from, ParameterStore<float> &to) {
  for (std::size_t i = 0; i < to.size(); ++i) {
    Tensor<float> dst = to.tensors()[i];
    auto src = from.tensors()[i].values();
    std::copy(src.begin(), src.end(), dst.mutable_values().begin());
  }
}

}  // namespace

nlohmann::json EpochLog::to_json() const {
  return {{"epoch", epoch},       {"loss", loss},         {"ce", classify},
          {"sim", similarity},    {"val_loss", val_loss}, {"val_f1", val_f1}};
}

Evaluation evaluate_pairs(const PairClassifier<float> &model, std::span<const PairExample> pairs,
                          std::size_t batch_size) {
  Evaluation ev;
  double loss_sum = 0.0;
  for (std::size_t start = 0; start < pairs.size(); start += batch_size) {
    auto batch = pairs.subspan(start, std::min(batch_size, pairs.size() - start));
    auto out = model.forward(batch, false, nullptr);
    loss_sum += static_cast<double>(out.loss.item()) * static_cast<double>(batch.size());
    ev.scores.insert(ev.scores.end(), out.scores.begin(), out.scores.end());
    for (const auto &p : batch) ev.labels.push_back(p.label);
  }
  ev.loss = pairs.empty() ? 0.0 : loss_sum / static_cast<double>(pairs.size());
  return ev;
}

TrainResult train_model(ModelKind kind, const Dataset &data,
                        std::span<const PairExample> train_pairs,
                        std::span<const PairExample> val_pairs, const RunConfig &config,
                        ParameterStore<float> &store, const TrainOptions &options) {
  config.validate();
  if (train_pairs.empty()) throw ContractError("train: no training pairs");
  if (val_pairs.empty()) val_pairs = train_pairs;

  auto model = make_model(kind, data, config, store);
  const auto seed = static_cast<std::uint64_t>(config.seed);
  Rng shuffle_rng(Rng::mix(seed, kShuffleSalt));
  Rng dropout_rng(Rng::mix(seed, kDropoutSalt));
  const AdamOptions adam{config.lr};
  const std::size_t batch_size = static_cast<std::size_t>(config.batch_size);

  std::vector<std::size_t> order(train_pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<PairExample> batch;

  TrainResult result;
  ParameterStore<float> best = store.clone();
  double best_f1 = -1.0;
  double best_loss = std::numeric_limits<double>::infinity();
  std::int64_t since_best = 0;

  for (std::int64_t epoch = 1; epoch <= config.epochs; ++epoch) {
    ParameterStore<float> last_good = store.clone();
    shuffle_rng.shuffle(std::span<std::size_t>(order));
    EpochLog log;
    log.epoch = static_cast<std::size_t>(epoch);
    try {
      for (std::size_t start = 0; start < order.size(); start += batch_size) {
        batch.clear();
        for (std::size_t i = start; i < std::min(order.size(), start + batch_size); ++i) {
          batch.push_back(train_pairs[order[i]]);
        }
        auto out = model->forward(batch, true, &dropout_rng);
        const double n = static_cast<double>(batch.size());
        log.loss += static_cast<double>(out.loss.item()) * n;
        log.classify += static_cast<double>(out.classify.item()) * n;
        log.similarity += static_cast<double>(out.similarity.item()) * n;
        backward(options.ce_only ? out.classify : out.loss);
        adam_step(store, adam);
      }
      require_finite(store);
    } catch (const NumericalError &) {
      if (options.on_divergence) options.on_divergence(last_good);
      throw;
    }
    const double n = static_cast<double>(train_pairs.size());
    log.loss /= n;
    log.classify /= n;
    log.similarity /= n;

    Evaluation ev = evaluate_pairs(*model, val_pairs, batch_size);
    log.val_loss = ev.loss;
    log.val_f1 = classification_metrics(ev.scores, ev.labels, config.tau).f1;
    result.log.push_back(log);
    if (options.on_epoch) options.on_epoch(log);

    if (log.val_f1 > best_f1 || (log.val_f1 == best_f1 && log.val_loss < best_loss)) {
      best_f1 = log.val_f1;
      best_loss = log.val_loss;
      best = store.clone();
      result.best_epoch = log.epoch;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      result.early_stopped = true;
      break;
    }
  }
  copy_values(best, store);
  return result;
}

TrainRun train_pipeline(ModelKind kind, const Dataset &data, std::span<const LabeledBlocks> names,
                        const RunConfig &config, const TrainOptions &options) {
  config.validate();
  const auto seed = static_cast<std::uint64_t>(config.seed);
  TrainRun run;
  std::tie(run.train_names, run.val_names) =
      split_names(names.size(), 0.1, Rng::mix(seed, kSplitSalt));
  auto subset = [&](const std::vector<std::size_t> &idx) {
    std::vector<LabeledBlocks> out;
    for (std::size_t i : idx) out.push_back(names[i]);
    return out;
  };
  run.train_sample =
      sample_training_pairs(subset(run.train_names), config.neg_ratio, Rng::mix(seed, kTrainPairSalt));
  run.val_sample =
      sample_training_pairs(subset(run.val_names), config.neg_ratio, Rng::mix(seed, kValPairSalt));
  run.params = init_model(kind, config);
  run.result = train_model(kind, data, run.train_sample.pairs, run.val_sample.pairs, config,
                           run.params, options);
  return run;
}

GradCheckResult check_model_gradients(const Dataset &data, std::span<const PairExample> pairs,
                                      const RunConfig &config, const GradCheckOptions &options) {
  if (pairs.empty()) throw ContractError("gradient check needs at least one pair");
  ParameterStore<double> store = init_model(ModelKind::kPairNet, config).cast<double>();
  const PairModel<double> model(data, config.model_dims(), static_cast<std::size_t>(config.l),
                                LossSettings::from(config), store);
  return gradient_check<double>([&] { return model.forward(pairs, false, nullptr).loss; }, store,
                                options);
}

}  // namespace hinpair
