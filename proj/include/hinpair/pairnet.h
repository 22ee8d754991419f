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

// Pseudo-Siamese LSTM pair classifier over paper-embedding sequences.

#ifndef HINPAIR_PAIRNET_H_
#define HINPAIR_PAIRNET_H_

#include <string>
#include <vector>

#include "hinpair/embed.h"
#include "hinpair/graph.h"
#include "hinpair/optim.h"
#include "hinpair/rng.h"
#include "hinpair/tensor.h"

namespace hinpair {

struct SeqItem {
  NodeId paper = 0;
  int year = 0;
  std::string paper_id;
};

// Papers of one block. Stored ascending by (year, paper_id).
struct PaperSequence {
  std::string block_id;
  std::vector<SeqItem> items;

  int start_year() const { return items.front().year; }
  const std::string &first_id() const { return items.front().paper_id; }
};

struct PairExample {
  PaperSequence first;
  PaperSequence second;
  int label = 0;  // 1 = same author
};

struct OrderedPair {
  PaperSequence early;  // ascending, feeds branch A
  PaperSequence late;   // descending, feeds branch B
};

// The sequence with the smaller (start year, first paper_id) is early. Throws
// ContractError on an empty sequence.
OrderedPair order_pair(const PaperSequence &s1, const PaperSequence &s2);

// Gate order in the stacked weights: input, forget, candidate, output.
template <typename T>
struct LstmParams {
  Tensor<T> w_ih;  // [4h, d]
  Tensor<T> w_hh;  // [4h, h]
  Tensor<T> bias;  // [4h]
};

template <typename T>
struct MlpParams {
  DenseLayer<T> layers[3];
};

template <typename T>
struct PairNetParams {
  LstmParams<T> lstm_a;
  LstmParams<T> lstm_b;
  MlpParams<T> mlp;
};

// Adds `{prefix}.W_ih|W_hh|b`.
template <typename T>
void init_lstm_params(ParameterStore<T> &store, const std::string &prefix, std::size_t d,
                      std::size_t d_h, Rng &rng);
// Adds `mlp.layer{1..3}.W|b` for in_dim -> d_h -> d_h/2 -> 2.
template <typename T>
void init_mlp_params(ParameterStore<T> &store, std::size_t in_dim, std::size_t d_h, Rng &rng);
template <typename T>
void init_pairnet_params(ParameterStore<T> &store, const ModelDims &dims, Rng &rng);

template <typename T>
LstmParams<T> bind_lstm_params(const ParameterStore<T> &store, const std::string &prefix,
                               std::size_t d, std::size_t d_h);
template <typename T>
MlpParams<T> bind_mlp_params(const ParameterStore<T> &store, std::size_t in_dim, std::size_t d_h);
template <typename T>
PairNetParams<T> bind_pairnet_params(const ParameterStore<T> &store, const ModelDims &dims);

// Runs the cell over the rows of inputs [t, d] from zero state; returns the
// hidden states [t, h].
template <typename T>
Tensor<T> lstm_forward(const LstmParams<T> &params, const Tensor<T> &inputs);

// Mean over time of [t, h] -> [h].
template <typename T>
Tensor<T> global_pool(const Tensor<T> &states);

// softmax(MLP([h1; h2])) with dropout after each hidden ReLU in train mode.
template <typename T>
Tensor<T> classify_pair(const Tensor<T> &h1, const Tensor<T> &h2, const MlpParams<T> &mlp,
                        double dropout_p, Rng *rng, bool train);

template <typename T>
struct PairLoss {
  Tensor<T> total;
  Tensor<T> classify;    // cross-entropy
  Tensor<T> similarity;  // label-conditioned cosine term
};

// CE(probs, label) + eta * sim, where sim = 1 - cos(h1, h2) for label 1 and
// max(0, cos(h1, h2) - margin) for label 0.
template <typename T>
PairLoss<T> pair_loss(const Tensor<T> &probs, const Tensor<T> &h1, const Tensor<T> &h2, int label,
                      double eta, double margin = 0.0);

}  // namespace hinpair

#endif  // HINPAIR_PAIRNET_H_
