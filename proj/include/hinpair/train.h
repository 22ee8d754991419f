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

#ifndef HINPAIR_TRAIN_H_
#define HINPAIR_TRAIN_H_

#include <functional>
#include <span>
#include <vector>

#include "hinpair/config.h"
#include "hinpair/dataset.h"
#include "hinpair/model.h"
#include "hinpair/optim.h"

#include <json.hpp>

namespace hinpair {

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double loss = 0.0;      // mean over training pairs
  double classify = 0.0;
  double similarity = 0.0;
  double val_loss = 0.0;
  double val_f1 = 0.0;

  nlohmann::json to_json() const;
};

struct TrainOptions {
  // Backpropagate the cross-entropy alone, ignoring eta.
  bool ce_only = false;
  // Called after every epoch.
  std::function<void(const EpochLog &)> on_epoch;
  // Receives the parameters from the start of the diverging epoch before the
  // NumericalError propagates.
  std::function<void(const ParameterStore<float> &)> on_divergence;
};

struct TrainResult {
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;
  bool early_stopped = false;
};

// Mini-batch Adam over `train_pairs`, validated on `val_pairs` (the training
// pairs themselves when empty). Keeps the parameters of the best validation
// epoch: higher F1, ties broken by lower validation loss. Throws
// NumericalError on divergence.
TrainResult train_model(ModelKind kind, const Dataset &data, std::span<const PairExample> train_pairs,
                        std::span<const PairExample> val_pairs, const RunConfig &config,
                        ParameterStore<float> &store, const TrainOptions &options = {});

// Eval-mode scores and mean loss, in batches of config.batch_size.
struct Evaluation {
  std::vector<double> scores;
  std::vector<int> labels;
  double loss = 0.0;
};
Evaluation evaluate_pairs(const PairClassifier<float> &model, std::span<const PairExample> pairs,
                          std::size_t batch_size);

struct TrainRun {
  ParameterStore<float> params;
  TrainResult result;
  std::vector<std::size_t> train_names;  // indices into the labelled names
  std::vector<std::size_t> val_names;
  PairSample train_sample;
  PairSample val_sample;
};

// Splits names 90/10, samples pairs for each side and trains from a fresh
// initialization.
TrainRun train_pipeline(ModelKind kind, const Dataset &data, std::span<const LabeledBlocks> names,
                        const RunConfig &config, const TrainOptions &options = {});

// Finite-difference check of the full pair loss over `pairs` at double
// precision, from the fresh initialization for config (dropout off).
GradCheckResult check_model_gradients(const Dataset &data, std::span<const PairExample> pairs,
                                      const RunConfig &config,
                                      const GradCheckOptions &options = {});

}  // namespace hinpair

#endif  // HINPAIR_TRAIN_H_
