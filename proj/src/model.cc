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

#include "hinpair/model.h"

#include <algorithm>
#include <map>
#include <utility>

#include "hinpair/errors.h"
#include "hinpair/rng.h"

namespace hinpair {

namespace {

// Running sums of per-pair loss terms, averaged at the end.
template <typename T>
struct LossAccumulator {
  Tensor<T> total, classify, similarity;

  void add_pair(const PairLoss<T> &l) {
    if (!total.defined()) {
      total = l.total;
      classify = l.classify;
      similarity = l.similarity;
      return;
    }
    total = add(total, l.total);
    classify = add(classify, l.classify);
    similarity = add(similarity, l.similarity);
  }

  void finish(BatchOutput<T> &out, std::size_t n) const {
    const double inv = 1.0 / static_cast<double>(n);
    out.loss = scale(total, inv);
    out.classify = scale(classify, inv);
    out.similarity = scale(similarity, inv);
  }
};

constexpr std::uint64_t kInitSalt = 1;

}  // namespace

template <typename T>
void PairModel<T>::init(ParameterStore<T> &store, const ModelDims &dims, Rng &rng) {
  init_embed_params(store, dims, rng);
  init_pairnet_params(store, dims, rng);
}

template <typename T>
PairModel<T>::PairModel(const Dataset &data, const ModelDims &dims, std::size_t l,
                        LossSettings loss, const ParameterStore<T> &store)
    : data_(data),
      l_(l),
      loss_(loss),
      embed_(bind_embed_params(store, dims)),
      pairnet_(bind_pairnet_params(store, dims)) {
  if (data.views.size() != dims.meta_paths.size()) {
    throw ContractError("dataset views do not match the model's meta-paths");
  }
  for (std::size_t p = 0; p < dims.meta_paths.size(); ++p) {
    if (!(data.views[p].path() == dims.meta_paths[p])) {
      throw ContractError("dataset view " + data.views[p].path().name() + " vs model path " +
                          dims.meta_paths[p].name());
    }
  }
}

template <typename T>
BatchOutput<T> PairModel<T>::forward(std::span<const PairExample> pairs, bool train,
                                     Rng *rng) const {
  if (pairs.empty()) throw ContractError("forward: empty batch");
  std::vector<NodeId> papers;
  for (const auto &pair : pairs) {
    for (const auto *seq : {&pair.first, &pair.second}) {
      for (const auto &item : seq->items) papers.push_back(item.paper);
    }
  }
  std::sort(papers.begin(), papers.end());
  papers.erase(std::unique(papers.begin(), papers.end()), papers.end());

  auto fused = embed_papers<T>(data_.views, data_.graph.features(), embed_, papers, l_);
  const Tensor<T> z = dropout(fused.z, loss_.dropout, rng, train);

  std::map<std::pair<std::string, int>, Tensor<T>> pooled;
  auto sequence_state = [&](const PaperSequence &seq, int branch) {
    auto key = std::make_pair(seq.block_id, branch);
    auto it = pooled.find(key);
    if (it != pooled.end() && !seq.block_id.empty()) return it->second;
    std::vector<std::uint32_t> rows;
    rows.reserve(seq.items.size());
    for (const auto &item : seq.items) {
      rows.push_back(static_cast<std::uint32_t>(
          std::lower_bound(papers.begin(), papers.end(), item.paper) - papers.begin()));
    }
    const auto &lstm = branch == 0 ? pairnet_.lstm_a : pairnet_.lstm_b;
    Tensor<T> h = global_pool(lstm_forward(lstm, gather_rows(z, rows)));
    pooled[key] = h;
    return h;
  };

  BatchOutput<T> out;
  LossAccumulator<T> acc;
  for (const auto &pair : pairs) {
    const OrderedPair ordered = order_pair(pair.first, pair.second);
    const Tensor<T> h_early = sequence_state(ordered.early, 0);
    const Tensor<T> h_late = sequence_state(ordered.late, 1);
    const Tensor<T> probs = classify_pair(h_early, h_late, pairnet_.mlp, loss_.dropout, rng, train);
    out.scores.push_back(static_cast<double>(probs[1]));
    acc.add_pair(pair_loss(probs, h_early, h_late, pair.label, loss_.eta, loss_.margin));
  }
  acc.finish(out, pairs.size());
  return out;
}

template <typename T>
void FeatureBaseline<T>::init(ParameterStore<T> &store, std::size_t d0, std::size_t d_h,
                              Rng &rng) {
  init_mlp_params(store, 2 * d0, d_h, rng);
}

template <typename T>
FeatureBaseline<T>::FeatureBaseline(const Dataset &data, std::size_t d_h, LossSettings loss,
                                    const ParameterStore<T> &store)
    : data_(data), loss_(loss), mlp_(bind_mlp_params(store, 2 * data.graph.features().cols, d_h)) {}

template <typename T>
Tensor<T> FeatureBaseline<T>::mean_features(const PaperSequence &seq) const {
  const DenseMatrix &features = data_.graph.features();
  std::vector<double> acc(features.cols, 0.0);
  for (const auto &item : seq.items) {
    auto row = features.row(item.paper);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += row[j];
  }
  std::vector<T> mean(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) {
    mean[j] = static_cast<T>(acc[j] / static_cast<double>(seq.items.size()));
  }
  return Tensor<T>::vector(std::move(mean));
}

template <typename T>
BatchOutput<T> FeatureBaseline<T>::forward(std::span<const PairExample> pairs, bool train,
                                           Rng *rng) const {
  if (pairs.empty()) throw ContractError("forward: empty batch");
  BatchOutput<T> out;
  LossAccumulator<T> acc;
  for (const auto &pair : pairs) {
    const OrderedPair ordered = order_pair(pair.first, pair.second);
    const Tensor<T> a = mean_features(ordered.early);
    const Tensor<T> b = mean_features(ordered.late);
    const Tensor<T> probs = classify_pair(a, b, mlp_, loss_.dropout, rng, train);
    out.scores.push_back(static_cast<double>(probs[1]));
    acc.add_pair(pair_loss(probs, a, b, pair.label, loss_.eta, loss_.margin));
  }
  acc.finish(out, pairs.size());
  return out;
}

template class PairModel<float>;
template class PairModel<double>;
template class FeatureBaseline<float>;
template class FeatureBaseline<double>;

ParameterStore<float> init_model(ModelKind kind, const RunConfig &config) {
  config.validate();
  ParameterStore<float> store;
  Rng rng(Rng::mix(static_cast<std::uint64_t>(config.seed), kInitSalt));
  if (kind == ModelKind::kPairNet) {
    PairModel<float>::init(store, config.model_dims(), rng);
  } else {
    FeatureBaseline<float>::init(store, static_cast<std::size_t>(config.d0),
                                 static_cast<std::size_t>(config.d_h), rng);
  }
  return store;
}

std::unique_ptr<PairClassifier<float>> make_model(ModelKind kind, const Dataset &data,
                                                  const RunConfig &config,
                                                  const ParameterStore<float> &store) {
  if (kind == ModelKind::kPairNet) {
    return std::make_unique<PairModel<float>>(data, config.model_dims(),
                                              static_cast<std::size_t>(config.l),
                                              LossSettings::from(config), store);
  }
  return std::make_unique<FeatureBaseline<float>>(data, static_cast<std::size_t>(config.d_h),
                                                  LossSettings::from(config), store);
}

}  // namespace hinpair
