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

#include "hinpair/embed.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hinpair/errors.h"

namespace hinpair {

namespace {

constexpr std::uint32_t kInactive = std::numeric_limits<std::uint32_t>::max();

std::string layer_name(const MetaPath &p, std::size_t k, const char *what) {
  return "view." + p.name() + ".layer" + std::to_string(k) + "." + what;
}

std::string attn_name(const MetaPath &p, const char *what) {
  return "attn." + p.name() + "." + what;
}

template <typename T>
const Tensor<T> &bound(const ParameterStore<T> &store, const std::string &name,
                       const Shape &expected) {
  const auto &t = store.get(name);
  if (t.shape() != expected) {
    throw ShapeError("parameter " + name + " has shape " + shape_string(t.shape()) +
                     ", expected " + shape_string(expected));
  }
  return t;
}

std::size_t layer_out(const ModelDims &dims, std::size_t k) { return k == 0 ? dims.d0 : dims.d; }

}  // namespace

template <typename T>
std::vector<T> glorot_uniform(std::size_t fan_out, std::size_t fan_in, Rng &rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<T> w(fan_out * fan_in);
  for (auto &x : w) x = static_cast<T>(rng.uniform(-limit, limit));
  return w;
}

template <typename T>
void init_embed_params(ParameterStore<T> &store, const ModelDims &dims, Rng &rng) {
  for (const auto &p : dims.meta_paths) {
    for (std::size_t k = 1; k <= dims.K; ++k) {
      const std::size_t in = layer_out(dims, k - 1), out = layer_out(dims, k);
      store.add(layer_name(p, k, "W"), {out, in}, glorot_uniform<T>(out, in, rng));
      store.add(layer_name(p, k, "b"), {out}, std::vector<T>(out, T(0)));
    }
  }
  for (const auto &p : dims.meta_paths) {
    store.add(attn_name(p, "W"), {dims.d_prime, dims.d},
              glorot_uniform<T>(dims.d_prime, dims.d, rng));
    store.add(attn_name(p, "b"), {dims.d_prime}, std::vector<T>(dims.d_prime, T(0)));
    std::vector<double> a(dims.d_prime);
    double norm = 0.0;
    while (norm == 0.0) {
      norm = 0.0;
      for (auto &x : a) {
        x = rng.uniform(-1.0, 1.0);
        norm += x * x;
      }
    }
    norm = std::sqrt(norm);
    std::vector<T> unit(dims.d_prime);
    for (std::size_t i = 0; i < a.size(); ++i) unit[i] = static_cast<T>(a[i] / norm);
    store.add(attn_name(p, "a"), {dims.d_prime}, std::move(unit));
  }
}

template <typename T>
EmbedParams<T> bind_embed_params(const ParameterStore<T> &store, const ModelDims &dims) {
  EmbedParams<T> params;
  for (const auto &p : dims.meta_paths) {
    std::vector<DenseLayer<T>> layers;
    for (std::size_t k = 1; k <= dims.K; ++k) {
      const std::size_t in = layer_out(dims, k - 1), out = layer_out(dims, k);
      layers.push_back({bound(store, layer_name(p, k, "W"), {out, in}),
                        bound(store, layer_name(p, k, "b"), {out})});
    }
    params.layers.push_back(std::move(layers));
    params.attention.push_back({bound(store, attn_name(p, "W"), {dims.d_prime, dims.d}),
                                bound(store, attn_name(p, "b"), {dims.d_prime}),
                                bound(store, attn_name(p, "a"), {dims.d_prime})});
  }
  return params;
}

template <typename T>
Tensor<T> neighbor_mean(const EgonetSubgraph &sub, const Tensor<T> &z_prev, NodeId v) {
  auto local = sub.local(v);
  if (!local) throw LookupError("paper " + std::to_string(v) + " not in subgraph");
  std::vector<std::uint32_t> members{*local};
  members.insert(members.end(), sub.adjacency[*local].begin(), sub.adjacency[*local].end());
  auto groups = std::make_shared<Segments>();
  groups->add_group(members);
  return row(segment_mean(z_prev, groups), 0);
}

template <typename T>
Tensor<T> layer_forward(const DenseLayer<T> &layer, const Tensor<T> &pooled, bool top_layer) {
  Tensor<T> out = linear(pooled, layer.weight, layer.bias);
  return top_layer ? out : relu(out);
}

template <typename T>
Tensor<T> embed_view(const EgonetSubgraph &sub, const DenseMatrix &features,
                     std::span<const DenseLayer<T>> layers, EmbedScope scope) {
  const std::size_t K = layers.size();
  if (K == 0) throw ContractError("embed_view needs at least one layer");
  if (features.cols != layers[0].weight.cols()) {
    throw ShapeError("embed_view: feature width " + std::to_string(features.cols) +
                     " vs layer-1 weight " + shape_string(layers[0].weight.shape()));
  }
  const std::size_t n = sub.size();
  auto active_at = [&](std::size_t k) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (scope == EmbedScope::kAllNodes || sub.hops[i] + k <= K) out.push_back(i);
    }
    return out;
  };

  std::vector<std::uint32_t> active = active_at(0);
  std::vector<std::uint32_t> pos(n, kInactive);
  for (std::uint32_t r = 0; r < active.size(); ++r) pos[active[r]] = r;

  const std::size_t d0 = features.cols;
  std::vector<T> x0(active.size() * d0);
  for (std::size_t r = 0; r < active.size(); ++r) {
    auto src = features.row(sub.nodes[active[r]]);
    std::copy(src.begin(), src.end(), x0.begin() + r * d0);
  }
  Tensor<T> z = Tensor<T>::constant({active.size(), d0}, std::move(x0));

  for (std::size_t k = 1; k <= K; ++k) {
    std::vector<std::uint32_t> next = active_at(k);
    auto groups = std::make_shared<Segments>();
    std::vector<std::uint32_t> members;
    for (std::uint32_t i : next) {
      members.assign(1, pos[i]);
      for (std::uint32_t u : sub.adjacency[i]) {
        if (pos[u] != kInactive) members.push_back(pos[u]);
      }
      groups->add_group(members);
    }
    z = layer_forward(layers[k - 1], segment_mean(z, std::move(groups)), k == K);
    std::fill(pos.begin(), pos.end(), kInactive);
    for (std::uint32_t r = 0; r < next.size(); ++r) pos[next[r]] = r;
    active = std::move(next);
  }

  if (scope == EmbedScope::kAllNodes) return z;
  std::vector<std::uint32_t> seed_rows;
  seed_rows.reserve(sub.seeds.size());
  for (NodeId s : sub.seeds) seed_rows.push_back(pos[*sub.local(s)]);
  return gather_rows(z, seed_rows);
}

template <typename T>
Tensor<T> attention_weights(std::span<const Tensor<T>> z_views,
                            std::span<const AttentionParams<T>> attention) {
  if (z_views.empty() || z_views.size() != attention.size()) {
    throw ShapeError("attention_weights: " + std::to_string(z_views.size()) + " views vs " +
                     std::to_string(attention.size()) + " attention blocks");
  }
  std::vector<Tensor<T>> scores;
  scores.reserve(z_views.size());
  for (std::size_t p = 0; p < z_views.size(); ++p) {
    const auto &a = attention[p];
    Tensor<T> transformed = tanh(linear(z_views[p], a.weight, a.bias));
    scores.push_back(cosine_rows(transformed, a.preference));
  }
  return softmax_rows(stack_columns<T>(scores));
}

template <typename T>
Tensor<T> fuse(std::span<const Tensor<T>> z_views, const Tensor<T> &weights) {
  if (z_views.empty() || weights.rank() != 2 || weights.cols() != z_views.size()) {
    throw ShapeError("fuse: weights " + shape_string(weights.shape()) + " for " +
                     std::to_string(z_views.size()) + " views");
  }
  Tensor<T> out = scale_rows(z_views[0], column(weights, 0));
  for (std::size_t p = 1; p < z_views.size(); ++p) {
    out = add(out, scale_rows(z_views[p], column(weights, p)));
  }
  return out;
}

template <typename T>
FusedEmbedding<T> embed_papers(std::span<const MetaPathView> views, const DenseMatrix &features,
                               const EmbedParams<T> &params, std::span<const NodeId> papers,
                               std::size_t l) {
  if (views.size() != params.layers.size()) {
    throw ShapeError("embed_papers: " + std::to_string(views.size()) + " views vs " +
                     std::to_string(params.layers.size()) + " parameter sets");
  }
  std::vector<NodeId> sorted(papers.begin(), papers.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ContractError("embed_papers: duplicate paper in request");
  }
  std::vector<Tensor<T>> per_view;
  per_view.reserve(views.size());
  for (std::size_t p = 0; p < views.size(); ++p) {
    EgonetSubgraph sub = sample_egonet(views[p], papers, l);
    per_view.push_back(embed_view<T>(sub, features, params.layers[p], EmbedScope::kSeedsOnly));
  }
  Tensor<T> weights = attention_weights<T>(per_view, params.attention);
  return {fuse<T>(per_view, weights), weights};
}

#define HINPAIR_INSTANTIATE(T)                                                                  \
  template std::vector<T> glorot_uniform<T>(std::size_t, std::size_t, Rng &);                   \
  template void init_embed_params<T>(ParameterStore<T> &, const ModelDims &, Rng &);             \
  template EmbedParams<T> bind_embed_params<T>(const ParameterStore<T> &, const ModelDims &);    \
  template Tensor<T> neighbor_mean<T>(const EgonetSubgraph &, const Tensor<T> &, NodeId);        \
  template Tensor<T> layer_forward<T>(const DenseLayer<T> &, const Tensor<T> &, bool);           \
  template Tensor<T> embed_view<T>(const EgonetSubgraph &, const DenseMatrix &,                  \
                                   std::span<const DenseLayer<T>>, EmbedScope);                  \
  template Tensor<T> attention_weights<T>(std::span<const Tensor<T>>,                            \
                                          std::span<const AttentionParams<T>>);                  \
  template Tensor<T> fuse<T>(std::span<const Tensor<T>>, const Tensor<T> &);                     \
  template FusedEmbedding<T> embed_papers<T>(std::span<const MetaPathView>, const DenseMatrix &, \
                                             const EmbedParams<T> &, std::span<const NodeId>,    \
                                             std::size_t);

HINPAIR_INSTANTIATE(float)
HINPAIR_INSTANTIATE(double)

#undef HINPAIR_INSTANTIATE

}  // namespace hinpair
