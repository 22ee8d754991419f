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

#ifndef HINPAIR_OPTIM_H_
#define HINPAIR_OPTIM_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hinpair/tensor.h"

namespace hinpair {

struct AdamOptions;

// Named learnable tensors plus Adam moment buffers. Move-only: copying would
// alias parameter storage; use clone() for an independent copy.
template <typename T>
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(ParameterStore &&) noexcept = default;
  ParameterStore &operator=(ParameterStore &&) noexcept = default;
  ParameterStore(const ParameterStore &) = delete;
  ParameterStore &operator=(const ParameterStore &) = delete;

  // Throws ValidationError on a duplicate name.
  Tensor<T> add(const std::string &name, Shape shape, std::vector<T> values);
  // Throws LookupError.
  const Tensor<T> &get(std::string_view name) const;
  bool contains(std::string_view name) const { return index_.count(name) > 0; }

  // Insertion order.
  const std::vector<std::string> &names() const { return names_; }
  const std::vector<Tensor<T>> &tensors() const { return params_; }
  std::size_t size() const { return params_.size(); }
  std::size_t num_values() const;

  void zero_grad();
  std::uint64_t step() const { return step_; }

  ParameterStore clone() const;
  template <typename U>
  ParameterStore<U> cast() const;

  // True when names, shapes and values are bitwise equal.
  bool bitwise_equal(const ParameterStore &other) const;

 private:
  template <typename>
  friend class ParameterStore;
  template <typename U>
  friend void adam_step(ParameterStore<U> &, const AdamOptions &);

  std::vector<std::string> names_;
  std::vector<Tensor<T>> params_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<T>> first_moment_;
  std::vector<std::vector<T>> second_moment_;
  std::uint64_t step_ = 0;
};

struct AdamOptions {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam update of every parameter, then zeroes gradients and
// increments the step counter.
template <typename T>
void adam_step(ParameterStore<T> &store, const AdamOptions &options);

struct GradCheckOptions {
  double h = 1e-4;
  // When set, check at most this many coordinates per tensor, chosen by a
  // seeded shuffle. Unset checks every coordinate.
  std::optional<std::size_t> max_coords_per_tensor;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  // Coordinates whose +/-h stencil crossed a ReLU kink.
  std::size_t skipped_kinks = 0;
  std::string worst;  // "name[index]"
};

// Central finite differences against backward(). Per coordinate the error is
// |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
template <typename T>
GradCheckResult gradient_check(const std::function<Tensor<T>()> &loss_fn,
                               ParameterStore<T> &store, const GradCheckOptions &options = {});

}  // namespace hinpair

#endif  // HINPAIR_OPTIM_H_
