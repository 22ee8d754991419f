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

// End-to-end pair classifiers: the multi-view embedding + LSTM pair network,
// and a graph-free baseline that feeds mean paper features to the same MLP.

#ifndef HINPAIR_MODEL_H_
#define HINPAIR_MODEL_H_

#include <memory>
#include <span>
#include <vector>

#include "hinpair/config.h"
#include "hinpair/dataset.h"
#include "hinpair/embed.h"
#include "hinpair/optim.h"
#include "hinpair/pairnet.h"

namespace hinpair {

template <typename T>
struct BatchOutput {
  Tensor<T> loss;        // mean total over the batch
  Tensor<T> classify;    // mean cross-entropy
  Tensor<T> similarity;  // mean similarity term (before eta)
  std::vector<double> scores;  // probability of "same author" per pair
};

template <typename T>
class PairClassifier {
 public:
  virtual ~PairClassifier() = default;
  // Pair labels feed only the loss. rng is required when train is set and
  // dropout is positive.
  virtual BatchOutput<T> forward(std::span<const PairExample> pairs, bool train,
                                 Rng *rng) const = 0;
  std::vector<double> score(std::span<const PairExample> pairs) const {
    return forward(pairs, false, nullptr).scores;
  }
};

struct LossSettings {
  double dropout = 0.2;
  double eta = 1.0;
  double margin = 0.0;

  static LossSettings from(const RunConfig &config) {
    return {config.dropout, config.eta, config.margin};
  }
};

template <typename T>
class PairModel : public PairClassifier<T> {
 public:
  // Adds every parameter of the network to the store.
  static void init(ParameterStore<T> &store, const ModelDims &dims, Rng &rng);

  // Binds to the store's tensors; the dataset must outlive the model.
  PairModel(const Dataset &data, const ModelDims &dims, std::size_t l, LossSettings loss,
            const ParameterStore<T> &store);

  BatchOutput<T> forward(std::span<const PairExample> pairs, bool train,
                         Rng *rng) const override;

 private:
  const Dataset &data_;
  std::size_t l_;
  LossSettings loss_;
  EmbedParams<T> embed_;
  PairNetParams<T> pairnet_;
};

template <typename T>
class FeatureBaseline : public PairClassifier<T> {
 public:
  static void init(ParameterStore<T> &store, std::size_t d0, std::size_t d_h, Rng &rng);

  FeatureBaseline(const Dataset &data, std::size_t d_h, LossSettings loss,
                  const ParameterStore<T> &store);

  BatchOutput<T> forward(std::span<const PairExample> pairs, bool train,
                         Rng *rng) const override;

 private:
  Tensor<T> mean_features(const PaperSequence &seq) const;

  const Dataset &data_;
  LossSettings loss_;
  MlpParams<T> mlp_;
};

enum class ModelKind { kPairNet, kFeatureBaseline };

// Fresh parameters for the model kind, seeded from config.seed.
ParameterStore<float> init_model(ModelKind kind, const RunConfig &config);

std::unique_ptr<PairClassifier<float>> make_model(ModelKind kind, const Dataset &data,
                                                  const RunConfig &config,
                                                  const ParameterStore<float> &store);

}  // namespace hinpair

#endif  // HINPAIR_MODEL_H_
