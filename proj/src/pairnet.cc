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

#include "hinpair/pairnet.h"

#include <algorithm>
#include <tuple>

#include "hinpair/errors.h"

namespace hinpair {

namespace {

template <typename T>
const Tensor<T> &checked(const ParameterStore<T> &store, const std::string &name,
                         const Shape &expected) {
  const auto &t = store.get(name);
  if (t.shape() != expected) {
    throw ShapeError("parameter " + name + " has shape " + shape_string(t.shape()) +
                     ", expected " + shape_string(expected));
  }
  return t;
}

std::size_t mlp_width(std::size_t layer, std::size_t in_dim, std::size_t d_h) {
  switch (layer) {
    case 0:
      return in_dim;
    case 1:
      return d_h;
    case 2:
      return d_h / 2;
    default:
      return 2;
  }
}

}  // namespace

OrderedPair order_pair(const PaperSequence &s1, const PaperSequence &s2) {
  if (s1.items.empty() || s2.items.empty()) throw ContractError("order_pair: empty sequence");
  auto key = [](const PaperSequence &s) {
    return std::tie(s.items.front().year, s.items.front().paper_id, s.block_id);
  };
  const bool first_early = key(s1) <= key(s2);
  OrderedPair out{first_early ? s1 : s2, first_early ? s2 : s1};
  std::reverse(out.late.items.begin(), out.late.items.end());
  return out;
}

template <typename T>
void init_lstm_params(ParameterStore<T> &store, const std::string &prefix, std::size_t d,
                      std::size_t d_h, Rng &rng) {
  store.add(prefix + ".W_ih", {4 * d_h, d}, glorot_uniform<T>(4 * d_h, d, rng));
  store.add(prefix + ".W_hh", {4 * d_h, d_h}, glorot_uniform<T>(4 * d_h, d_h, rng));
  store.add(prefix + ".b", {4 * d_h}, std::vector<T>(4 * d_h, T(0)));
}

template <typename T>
void init_mlp_params(ParameterStore<T> &store, std::size_t in_dim, std::size_t d_h, Rng &rng) {
  if (d_h < 2) throw ValidationError("d_h must be at least 2");
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t in = mlp_width(k, in_dim, d_h), out = mlp_width(k + 1, in_dim, d_h);
    const std::string base = "mlp.layer" + std::to_string(k + 1);
    store.add(base + ".W", {out, in}, glorot_uniform<T>(out, in, rng));
    store.add(base + ".b", {out}, std::vector<T>(out, T(0)));
  }
}

template <typename T>
void init_pairnet_params(ParameterStore<T> &store, const ModelDims &dims, Rng &rng) {
  init_lstm_params(store, "lstmA", dims.d, dims.d_h, rng);
  init_lstm_params(store, "lstmB", dims.d, dims.d_h, rng);
  init_mlp_params(store, 2 * dims.d_h, dims.d_h, rng);
}

template <typename T>
LstmParams<T> bind_lstm_params(const ParameterStore<T> &store, const std::string &prefix,
                               std::size_t d, std::size_t d_h) {
  return {checked(store, prefix + ".W_ih", {4 * d_h, d}),
          checked(store, prefix + ".W_hh", {4 * d_h, d_h}),
          checked(store, prefix + ".b", {4 * d_h})};
}

template <typename T>
MlpParams<T> bind_mlp_params(const ParameterStore<T> &store, std::size_t in_dim,
                             std::size_t d_h) {
  MlpParams<T> mlp;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t in = mlp_width(k, in_dim, d_h), out = mlp_width(k + 1, in_dim, d_h);
    const std::string base = "mlp.layer" + std::to_string(k + 1);
    mlp.layers[k] = {checked(store, base + ".W", {out, in}), checked(store, base + ".b", {out})};
  }
  return mlp;
}

template <typename T>
PairNetParams<T> bind_pairnet_params(const ParameterStore<T> &store, const ModelDims &dims) {
  return {bind_lstm_params(store, "lstmA", dims.d, dims.d_h),
          bind_lstm_params(store, "lstmB", dims.d, dims.d_h),
          bind_mlp_params(store, 2 * dims.d_h, dims.d_h)};
}

template <typename T>
Tensor<T> lstm_forward(const LstmParams<T> &params, const Tensor<T> &inputs) {
  if (inputs.rank() != 2 || inputs.rows() == 0 || inputs.cols() != params.w_ih.cols()) {
    throw ShapeError("lstm_forward: inputs " + shape_string(inputs.shape()) + " vs W_ih " +
                     shape_string(params.w_ih.shape()));
  }
  const std::size_t h = params.w_hh.cols();
  const Tensor<T> projected = linear(inputs, params.w_ih, params.bias);  // [t, 4h]
  std::vector<Tensor<T>> states;
  states.reserve(inputs.rows());
  Tensor<T> hidden, cell;
  for (std::size_t t = 0; t < inputs.rows(); ++t) {
    Tensor<T> gates = row(projected, t);
    if (t > 0) gates = add(gates, linear(hidden, params.w_hh, Tensor<T>()));
    const Tensor<T> in_gate = sigmoid(slice(gates, 0, h));
    const Tensor<T> forget = sigmoid(slice(gates, h, h));
    const Tensor<T> candidate = tanh(slice(gates, 2 * h, h));
    const Tensor<T> out_gate = sigmoid(slice(gates, 3 * h, h));
    // With zero initial state, f * c_{-1} vanishes.
    cell = t == 0 ? mul(in_gate, candidate) : add(mul(forget, cell), mul(in_gate, candidate));
    hidden = mul(out_gate, tanh(cell));
    states.push_back(hidden);
  }
  return stack_rows<T>(states);
}

template <typename T>
Tensor<T> global_pool(const Tensor<T> &states) {
  return row_mean(states);
}

template <typename T>
Tensor<T> classify_pair(const Tensor<T> &h1, const Tensor<T> &h2, const MlpParams<T> &mlp,
                        double dropout_p, Rng *rng, bool train) {
  const Tensor<T> parts[] = {h1, h2};
  Tensor<T> x = concat<T>(parts);
  for (std::size_t k = 0; k < 2; ++k) {
    x = dropout(relu(linear(x, mlp.layers[k].weight, mlp.layers[k].bias)), dropout_p, rng, train);
  }
  return softmax(linear(x, mlp.layers[2].weight, mlp.layers[2].bias));
}

template <typename T>
PairLoss<T> pair_loss(const Tensor<T> &probs, const Tensor<T> &h1, const Tensor<T> &h2, int label,
                      double eta, double margin) {
  if (label != 0 && label != 1) throw ContractError("pair_loss: label must be 0 or 1");
  if (eta < 0) throw ContractError("pair_loss: eta must be nonnegative");
  PairLoss<T> out;
  out.classify = cross_entropy(probs, static_cast<std::size_t>(label));
  const Tensor<T> cos = cosine(h1, h2);
  out.similarity = label == 1 ? add_scalar(scale(cos, -1.0), 1.0) : relu(add_scalar(cos, -margin));
  out.total = add(out.classify, scale(out.similarity, eta));
  return out;
}

#define HINPAIR_INSTANTIATE(T)                                                                   \
  template void init_lstm_params<T>(ParameterStore<T> &, const std::string &, std::size_t,        \
                                    std::size_t, Rng &);                                          \
  template void init_mlp_params<T>(ParameterStore<T> &, std::size_t, std::size_t, Rng &);         \
  template void init_pairnet_params<T>(ParameterStore<T> &, const ModelDims &, Rng &);            \
  template LstmParams<T> bind_lstm_params<T>(const ParameterStore<T> &, const std::string &,      \
                                             std::size_t, std::size_t);                           \
  template MlpParams<T> bind_mlp_params<T>(const ParameterStore<T> &, std::size_t, std::size_t);  \
  template PairNetParams<T> bind_pairnet_params<T>(const ParameterStore<T> &, const ModelDims &); \
  template Tensor<T> lstm_forward<T>(const LstmParams<T> &, const Tensor<T> &);                   \
  template Tensor<T> global_pool<T>(const Tensor<T> &);                                           \
  template Tensor<T> classify_pair<T>(const Tensor<T> &, const Tensor<T> &, const MlpParams<T> &, \
                                      double, Rng *, bool);                                       \
  template PairLoss<T> pair_loss<T>(const Tensor<T> &, const Tensor<T> &, const Tensor<T> &, int, \
                                    double, double);

HINPAIR_INSTANTIATE(float)
HINPAIR_INSTANTIATE(double)

#undef HINPAIR_INSTANTIATE

}  // namespace hinpair
