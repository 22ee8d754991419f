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

// Multi-view inductive paper embedding and semantic attention fusion.
//
// Per meta-path view p and layer k = 1..K, every paper first pools its own
// layer-(k-1) vector with those of its view neighbors (plain mean), then
// applies an affine map: ReLU on hidden layers, identity on the top layer.
// Layer 0 is the paper feature row. The K-th layer vectors of all views are
// then weighted by a per-paper softmax over cosine scores between
// tanh(W_p z_p + b_p) and a learned preference vector a_p, and summed.

#ifndef HINPAIR_EMBED_H_
#define HINPAIR_EMBED_H_

#include <span>
#include <vector>

#include "hinpair/graph.h"
#include "hinpair/optim.h"
#include "hinpair/rng.h"
#include "hinpair/tensor.h"
#include "hinpair/views.h"

namespace hinpair {

// Architecture sizes shared by the embedding and pair layers.
struct ModelDims {
  std::vector<MetaPath> meta_paths = default_meta_paths();
  std::size_t d0 = 128;      // paper feature size
  std::size_t d = 64;        // per-view and fused embedding size
  std::size_t d_prime = 32;  // attention space size
  std::size_t K = 2;         // embedding layers
  std::size_t d_h = 64;      // LSTM hidden size
};

template <typename T>
struct DenseLayer {
  Tensor<T> weight;  // [out, in]
  Tensor<T> bias;    // [out]
};

template <typename T>
struct AttentionParams {
  Tensor<T> weight;      // [d', d]
  Tensor<T> bias;        // [d']
  Tensor<T> preference;  // [d']
};

template <typename T>
struct EmbedParams {
  std::vector<std::vector<DenseLayer<T>>> layers;  // [view][k - 1]
  std::vector<AttentionParams<T>> attention;       // [view]
};

// Uniform in +/- sqrt(6 / (fan_in + fan_out)).
template <typename T>
std::vector<T> glorot_uniform(std::size_t fan_out, std::size_t fan_in, Rng &rng);

// Adds `view.{PATH}.layer{k}.W|b` and `attn.{PATH}.W|b|a` to the store.
template <typename T>
void init_embed_params(ParameterStore<T> &store, const ModelDims &dims, Rng &rng);

// Looks the parameters up by name. Throws LookupError or ShapeError when the
// store does not match `dims`.
template <typename T>
EmbedParams<T> bind_embed_params(const ParameterStore<T> &store, const ModelDims &dims);

// Mean over {v} and v's subgraph neighbors of the rows of z_prev (rows
// aligned with sub.nodes).
template <typename T>
Tensor<T> neighbor_mean(const EgonetSubgraph &sub, const Tensor<T> &z_prev, NodeId v);

// weight * pooled + bias, followed by ReLU unless top_layer.
template <typename T>
Tensor<T> layer_forward(const DenseLayer<T> &layer, const Tensor<T> &pooled, bool top_layer);

enum class EmbedScope {
  kAllNodes,   // every subgraph node, rows aligned with sub.nodes
  kSeedsOnly,  // only the seeds, rows aligned with sub.seeds
};

// K synchronous rounds of pooling and transform over the subgraph. With
// kSeedsOnly, layer k is evaluated only where it can still reach a seed,
// which gives bitwise the same seed rows as kAllNodes.
template <typename T>
Tensor<T> embed_view(const EgonetSubgraph &sub, const DenseMatrix &features,
                     std::span<const DenseLayer<T>> layers, EmbedScope scope);

// Per-row softmax over views of cos(a_p, tanh(W_p z_p + b_p)). Each z_views
// entry is [n, d] with rows aligned across views. Returns [n, |views|].
template <typename T>
Tensor<T> attention_weights(std::span<const Tensor<T>> z_views,
                            std::span<const AttentionParams<T>> attention);

// Sum over views of weights[:, p] * z_views[p].
template <typename T>
Tensor<T> fuse(std::span<const Tensor<T>> z_views, const Tensor<T> &weights);

template <typename T>
struct FusedEmbedding {
  Tensor<T> z;        // [n, d], rows aligned with the requested papers
  Tensor<T> weights;  // [n, |views|]
};

// Samples one l-egonet per view around `papers`, embeds them and fuses.
template <typename T>
FusedEmbedding<T> embed_papers(std::span<const MetaPathView> views, const DenseMatrix &features,
                               const EmbedParams<T> &params, std::span<const NodeId> papers,
                               std::size_t l);

}  // namespace hinpair

#endif  // HINPAIR_EMBED_H_
