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

#include "hinpair/optim.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "hinpair/errors.h"
#include "hinpair/rng.h"

namespace hinpair {

template <typename T>
Tensor<T> ParameterStore<T>::add(const std::string &name, Shape shape, std::vector<T> values) {
  if (contains(name)) throw ValidationError("duplicate parameter name \"" + name + "\"");
  auto tensor = Tensor<T>::parameter(std::move(shape), std::move(values));
  index_.emplace(name, params_.size());
  names_.push_back(name);
  params_.push_back(tensor);
  first_moment_.emplace_back(tensor.size(), T(0));
  second_moment_.emplace_back(tensor.size(), T(0));
  return tensor;
}

template <typename T>
const Tensor<T> &ParameterStore<T>::get(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw LookupError("no parameter named \"" + std::string(name) + "\"");
  return params_[it->second];
}

template <typename T>
std::size_t ParameterStore<T>::num_values() const {
  std::size_t n = 0;
  for (const auto &p : params_) n += p.size();
  return n;
}

template <typename T>
void ParameterStore<T>::zero_grad() {
  for (auto &p : params_) p.zero_grad();
}

template <typename T>
ParameterStore<T> ParameterStore<T>::clone() const {
  ParameterStore<T> out;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto &p = params_[i];
    out.add(names_[i], p.shape(), std::vector<T>(p.values().begin(), p.values().end()));
  }
  out.first_moment_ = first_moment_;
  out.second_moment_ = second_moment_;
  out.step_ = step_;
  return out;
}

template <typename T>
template <typename U>
ParameterStore<U> ParameterStore<T>::cast() const {
  ParameterStore<U> out;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto &p = params_[i];
    std::vector<U> values(p.values().begin(), p.values().end());
    out.add(names_[i], p.shape(), std::move(values));
  }
  return out;
}

template <typename T>
bool ParameterStore<T>::bitwise_equal(const ParameterStore &other) const {
  if (names_ != other.names_) return false;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto &a = params_[i];
    const auto &b = other.params_[i];
    if (a.shape() != b.shape()) return false;
    if (std::memcmp(a.values().data(), b.values().data(), a.size() * sizeof(T)) != 0) {
      return false;
    }
  }
  return true;
}

template <typename T>
void adam_step(ParameterStore<T> &store, const AdamOptions &options) {
  ++store.step_;
  const double t = static_cast<double>(store.step_);
  const double correction1 = 1.0 - std::pow(options.beta1, t);
  const double correction2 = 1.0 - std::pow(options.beta2, t);
  for (std::size_t i = 0; i < store.params_.size(); ++i) {
    auto &param = store.params_[i];
    auto values = param.mutable_values();
    auto grad = param.mutable_grad();
    auto &m = store.first_moment_[i];
    auto &v = store.second_moment_[i];
    for (std::size_t j = 0; j < values.size(); ++j) {
      const double g = grad[j];
      const double mj = options.beta1 * m[j] + (1.0 - options.beta1) * g;
      const double vj = options.beta2 * v[j] + (1.0 - options.beta2) * g * g;
      m[j] = static_cast<T>(mj);
      v[j] = static_cast<T>(vj);
      const double m_hat = mj / correction1;
      const double v_hat = vj / correction2;
      values[j] = static_cast<T>(values[j] - options.lr * m_hat / (std::sqrt(v_hat) + options.eps));
    }
    param.zero_grad();
  }
}

template <typename T>
GradCheckResult gradient_check(const std::function<Tensor<T>()> &loss_fn,
                               ParameterStore<T> &store, const GradCheckOptions &options) {
  store.zero_grad();
  backward(loss_fn());
  std::vector<std::vector<T>> analytic;
  for (const auto &p : store.tensors()) analytic.emplace_back(p.grad().begin(), p.grad().end());
  store.zero_grad();

  auto evaluate = [&](std::uint64_t &signature) {
    KinkTrace trace;
    const double value = static_cast<double>(loss_fn().item());
    signature = trace.signature();
    return value;
  };

  GradCheckResult result;
  Rng rng(options.seed);
  for (std::size_t t = 0; t < store.size(); ++t) {
    Tensor<T> param = store.tensors()[t];
    std::vector<std::size_t> coords(param.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (options.max_coords_per_tensor && coords.size() > *options.max_coords_per_tensor) {
      rng.shuffle(std::span<std::size_t>(coords));
      coords.resize(*options.max_coords_per_tensor);
      std::sort(coords.begin(), coords.end());
    }
    auto values = param.mutable_values();
    for (std::size_t j : coords) {
      const T saved = values[j];
      std::uint64_t sig_plus = 0, sig_minus = 0;
      values[j] = static_cast<T>(saved + options.h);
      const double f_plus = evaluate(sig_plus);
      values[j] = static_cast<T>(saved - options.h);
      const double f_minus = evaluate(sig_minus);
      values[j] = saved;
      if (sig_plus != sig_minus) {
        ++result.skipped_kinks;
        continue;
      }
      const double numeric = (f_plus - f_minus) / (2.0 * options.h);
      const double exact = analytic[t][j];
      const double err =
          std::abs(exact - numeric) / std::max(1e-8, std::abs(exact) + std::abs(numeric));
      ++result.checked;
      if (err > result.max_relative_error || result.worst.empty()) {
        result.max_relative_error = err;
        result.worst = store.names()[t] + "[" + std::to_string(j) + "]";
      }
    }
  }
  return result;
}

template class ParameterStore<float>;
template class ParameterStore<double>;
template ParameterStore<double> ParameterStore<float>::cast<double>() const;
template ParameterStore<float> ParameterStore<double>::cast<float>() const;
template ParameterStore<float> ParameterStore<float>::cast<float>() const;
template void adam_step<float>(ParameterStore<float> &, const AdamOptions &);
template void adam_step<double>(ParameterStore<double> &, const AdamOptions &);
template GradCheckResult gradient_check<float>(const std::function<Tensor<float>()> &,
                                               ParameterStore<float> &, const GradCheckOptions &);
template GradCheckResult gradient_check<double>(const std::function<Tensor<double>()> &,
                                                ParameterStore<double> &,
                                                const GradCheckOptions &);

}  // namespace hinpair
