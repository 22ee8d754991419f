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

#include "hinpair/tensor.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <utility>

#include "hinpair/errors.h"
#include "hinpair/rng.h"

namespace hinpair {

std::string shape_string(const Shape &shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

void Segments::add_group(std::span<const std::uint32_t> rows) {
  members.insert(members.end(), rows.begin(), rows.end());
  offsets.push_back(static_cast<std::uint32_t>(members.size()));
}

namespace {

thread_local KinkTrace *active_trace = nullptr;

template <typename T>
using NodePtr = std::shared_ptr<detail::Node<T>>;

std::size_t element_count(const Shape &shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

template <typename T>
Tensor<T> make_leaf(Shape shape, std::vector<T> values, bool requires_grad) {
  if (element_count(shape) != values.size()) {
    throw ShapeError("shape " + shape_string(shape) + " does not hold " +
                     std::to_string(values.size()) + " values");
  }
  auto node = std::make_shared<detail::Node<T>>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  if (requires_grad) node->grad.assign(node->value.size(), T(0));
  return Tensor<T>(std::move(node));
}

template <typename T>
Tensor<T> make_op(const char *op, Shape shape, std::vector<T> value,
                  std::vector<NodePtr<T>> inputs, std::function<void(detail::Node<T> &)> bw) {
  for (T v : value) {
    if (!std::isfinite(v)) throw NumericalError(std::string(op) + " produced a non-finite value");
  }
  auto node = std::make_shared<detail::Node<T>>();
  node->shape = std::move(shape);
  node->value = std::move(value);
  node->op = op;
  const bool needs_grad =
      std::any_of(inputs.begin(), inputs.end(), [](const auto &in) { return in->requires_grad; });
  if (needs_grad) {
    node->requires_grad = true;
    node->grad.assign(node->value.size(), T(0));
    node->inputs = std::move(inputs);
    node->backward = std::move(bw);
  }
  return Tensor<T>(std::move(node));
}

template <typename T>
void expect_rank(const Tensor<T> &t, std::size_t rank, const char *op) {
  if (!t.defined()) throw ShapeError(std::string(op) + ": undefined tensor");
  if (t.rank() != rank) {
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) + ", got " +
                     shape_string(t.shape()));
  }
}

template <typename T>
void expect_same(const Tensor<T> &a, const Tensor<T> &b, const char *op) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
                     shape_string(b.shape()));
  }
}

template <typename T, typename F, typename G>
Tensor<T> unary(const char *op, const Tensor<T> &x, F forward, G derivative) {
  std::vector<T> out(x.size());
  auto xv = x.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = forward(xv[i]);
  return make_op<T>(op, x.shape(), std::move(out), {x.shared()}, [derivative](detail::Node<T> &self) {
    auto &in = *self.inputs[0];
    for (std::size_t i = 0; i < self.grad.size(); ++i) {
      in.grad[i] += self.grad[i] * derivative(in.value[i], self.value[i]);
    }
  });
}

}  // namespace

KinkTrace::KinkTrace() : previous_(active_trace) { active_trace = this; }
KinkTrace::~KinkTrace() { active_trace = previous_; }

void KinkTrace::record(bool positive) {
  signature_ ^= positive ? 0x9e3779b97f4a7c15ULL : 0x7f4a7c159e3779b9ULL;
  signature_ *= 1099511628211ULL;
}

template <typename T>
Tensor<T> Tensor<T>::constant(Shape shape, std::vector<T> values) {
  return make_leaf<T>(std::move(shape), std::move(values), false);
}

template <typename T>
Tensor<T> Tensor<T>::parameter(Shape shape, std::vector<T> values) {
  return make_leaf<T>(std::move(shape), std::move(values), true);
}

template <typename T>
Tensor<T> Tensor<T>::zeros(Shape shape) {
  const std::size_t n = element_count(shape);
  return make_leaf<T>(std::move(shape), std::vector<T>(n, T(0)), false);
}

template <typename T>
Tensor<T> Tensor<T>::vector(std::vector<T> values) {
  Shape shape{values.size()};
  return make_leaf<T>(std::move(shape), std::move(values), false);
}

template <typename T>
Tensor<T> Tensor<T>::scalar(T value) {
  return make_leaf<T>({1}, {value}, false);
}

template <typename T>
T Tensor<T>::item() const {
  if (size() != 1) throw ContractError("item() on tensor of shape " + shape_string(shape()));
  return node_->value[0];
}

template <typename T>
void Tensor<T>::zero_grad() {
  std::fill(node_->grad.begin(), node_->grad.end(), T(0));
}

template <typename T>
void backward(const Tensor<T> &loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw ContractError("backward() needs a scalar loss, got " +
                        (loss.defined() ? shape_string(loss.shape()) : std::string("undefined")));
  }
  if (!loss.requires_grad()) return;

  // Iterative post-order DFS; the reverse is a topological order.
  std::vector<detail::Node<T> *> order;
  std::unordered_set<detail::Node<T> *> visited;
  std::vector<std::pair<detail::Node<T> *, std::size_t>> stack;
  stack.emplace_back(loss.node(), 0);
  visited.insert(loss.node());
  while (!stack.empty()) {
    auto &[node, next] = stack.back();
    if (next < node->inputs.size()) {
      detail::Node<T> *child = node->inputs[next++].get();
      if (child->requires_grad && visited.insert(child).second) stack.emplace_back(child, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  loss.node()->grad[0] += T(1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward) (*it)->backward(**it);
  }
}

// --- products -------------------------------------------------------------

template <typename T>
Tensor<T> matmul(const Tensor<T> &a, const Tensor<T> &b) {
  expect_rank(a, 2, "matmul");
  if (!b.defined() || (b.rank() != 1 && b.rank() != 2) || b.shape()[0] != a.cols()) {
    throw ShapeError("matmul: shape mismatch " + shape_string(a.shape()) + " x " +
                     (b.defined() ? shape_string(b.shape()) : std::string("undefined")));
  }
  const std::size_t m = a.rows(), k = a.cols();
  const std::size_t n = b.rank() == 1 ? 1 : b.cols();
  auto av = a.values();
  auto bv = b.values();
  std::vector<T> out(m * n);
  std::vector<double> acc(n);
  for (std::size_t i = 0; i < m; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t p = 0; p < k; ++p) {
      const double x = av[i * k + p];
      const T *brow = bv.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) acc[j] += x * brow[j];
    }
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = static_cast<T>(acc[j]);
  }
  Shape shape = b.rank() == 1 ? Shape{m} : Shape{m, n};
  return make_op<T>("matmul", std::move(shape), std::move(out), {a.shared(), b.shared()},
                    [m, k, n](detail::Node<T> &self) {
                      auto &a = *self.inputs[0];
                      auto &b = *self.inputs[1];
                      if (a.requires_grad) {
                        for (std::size_t i = 0; i < m; ++i) {
                          for (std::size_t p = 0; p < k; ++p) {
                            double s = 0.0;
                            for (std::size_t j = 0; j < n; ++j) {
                              s += static_cast<double>(self.grad[i * n + j]) * b.value[p * n + j];
                            }
                            a.grad[i * k + p] += static_cast<T>(s);
                          }
                        }
                      }
                      if (b.requires_grad) {
                        std::vector<double> buf(k * n, 0.0);
                        for (std::size_t i = 0; i < m; ++i) {
                          for (std::size_t p = 0; p < k; ++p) {
                            const double x = a.value[i * k + p];
                            for (std::size_t j = 0; j < n; ++j) {
                              buf[p * n + j] += x * self.grad[i * n + j];
                            }
                          }
                        }
                        for (std::size_t q = 0; q < buf.size(); ++q) {
                          b.grad[q] += static_cast<T>(buf[q]);
                        }
                      }
                    });
}

template <typename T>
Tensor<T> linear(const Tensor<T> &x, const Tensor<T> &weight, const Tensor<T> &bias) {
  expect_rank(weight, 2, "linear");
  if (!x.defined() || (x.rank() != 1 && x.rank() != 2)) throw ShapeError("linear: bad input");
  const std::size_t out_dim = weight.rows(), in_dim = weight.cols();
  const std::size_t n = x.rank() == 1 ? 1 : x.rows();
  const std::size_t x_cols = x.rank() == 1 ? x.size() : x.cols();
  if (x_cols != in_dim) {
    throw ShapeError("linear: shape mismatch " + shape_string(x.shape()) + " vs weight " +
                     shape_string(weight.shape()));
  }
  if (bias.defined() && (bias.rank() != 1 || bias.size() != out_dim)) {
    throw ShapeError("linear: shape mismatch bias " + shape_string(bias.shape()) +
                     " vs weight " + shape_string(weight.shape()));
  }
  auto xv = x.values();
  auto wv = weight.values();
  std::vector<T> wt(in_dim * out_dim);
  for (std::size_t o = 0; o < out_dim; ++o) {
    for (std::size_t k = 0; k < in_dim; ++k) wt[k * out_dim + o] = wv[o * in_dim + k];
  }
  std::vector<T> out(n * out_dim);
  std::vector<double> acc(out_dim);
  for (std::size_t i = 0; i < n; ++i) {
    if (bias.defined()) {
      for (std::size_t o = 0; o < out_dim; ++o) acc[o] = bias.values()[o];
    } else {
      std::fill(acc.begin(), acc.end(), 0.0);
    }
    const T *xrow = xv.data() + i * in_dim;
    for (std::size_t k = 0; k < in_dim; ++k) {
      const double xk = xrow[k];
      const T *wrow = wt.data() + k * out_dim;
      for (std::size_t o = 0; o < out_dim; ++o) acc[o] += xk * wrow[o];
    }
    for (std::size_t o = 0; o < out_dim; ++o) out[i * out_dim + o] = static_cast<T>(acc[o]);
  }
  Shape shape = x.rank() == 1 ? Shape{out_dim} : Shape{n, out_dim};
  std::vector<NodePtr<T>> inputs{x.shared(), weight.shared()};
  if (bias.defined()) inputs.push_back(bias.shared());
  return make_op<T>(
      "linear", std::move(shape), std::move(out), std::move(inputs),
      [n, in_dim, out_dim](detail::Node<T> &self) {
        auto &x = *self.inputs[0];
        auto &w = *self.inputs[1];
        const T *g = self.grad.data();
        if (x.requires_grad) {
          std::vector<double> acc(in_dim);
          for (std::size_t i = 0; i < n; ++i) {
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::size_t o = 0; o < out_dim; ++o) {
              const double go = g[i * out_dim + o];
              if (go == 0.0) continue;
              const T *wrow = w.value.data() + o * in_dim;
              for (std::size_t k = 0; k < in_dim; ++k) acc[k] += go * wrow[k];
            }
            T *dx = x.grad.data() + i * in_dim;
            for (std::size_t k = 0; k < in_dim; ++k) dx[k] += static_cast<T>(acc[k]);
          }
        }
        if (w.requires_grad) {
          std::vector<double> buf(out_dim * in_dim, 0.0);
          for (std::size_t i = 0; i < n; ++i) {
            const T *xrow = x.value.data() + i * in_dim;
            for (std::size_t o = 0; o < out_dim; ++o) {
              const double go = g[i * out_dim + o];
              if (go == 0.0) continue;
              double *brow = buf.data() + o * in_dim;
              for (std::size_t k = 0; k < in_dim; ++k) brow[k] += go * xrow[k];
            }
          }
          for (std::size_t q = 0; q < buf.size(); ++q) w.grad[q] += static_cast<T>(buf[q]);
        }
        if (self.inputs.size() > 2 && self.inputs[2]->requires_grad) {
          auto &b = *self.inputs[2];
          for (std::size_t o = 0; o < out_dim; ++o) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += g[i * out_dim + o];
            b.grad[o] += static_cast<T>(s);
          }
        }
      });
}

// --- elementwise ------------------------------------------------------------

template <typename T>
Tensor<T> add(const Tensor<T> &a, const Tensor<T> &b) {
  expect_same(a, b, "add");
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return make_op<T>("add", a.shape(), std::move(out), {a.shared(), b.shared()},
                    [](detail::Node<T> &self) {
                      for (auto &in : self.inputs) {
                        if (!in->requires_grad) continue;
                        for (std::size_t i = 0; i < self.grad.size(); ++i) in->grad[i] += self.grad[i];
                      }
                    });
}

template <typename T>
Tensor<T> sub(const Tensor<T> &a, const Tensor<T> &b) {
  expect_same(a, b, "sub");
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return make_op<T>("sub", a.shape(), std::move(out), {a.shared(), b.shared()},
                    [](detail::Node<T> &self) {
                      auto &a = *self.inputs[0];
                      auto &b = *self.inputs[1];
                      for (std::size_t i = 0; i < self.grad.size(); ++i) {
                        if (a.requires_grad) a.grad[i] += self.grad[i];
                        if (b.requires_grad) b.grad[i] -= self.grad[i];
                      }
                    });
}

template <typename T>
Tensor<T> mul(const Tensor<T> &a, const Tensor<T> &b) {
  expect_same(a, b, "mul");
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return make_op<T>("mul", a.shape(), std::move(out), {a.shared(), b.shared()},
                    [](detail::Node<T> &self) {
                      auto &a = *self.inputs[0];
                      auto &b = *self.inputs[1];
                      for (std::size_t i = 0; i < self.grad.size(); ++i) {
                        if (a.requires_grad) a.grad[i] += self.grad[i] * b.value[i];
                        if (b.requires_grad) b.grad[i] += self.grad[i] * a.value[i];
                      }
                    });
}

template <typename T>
Tensor<T> scale(const Tensor<T> &x, double c) {
  const T k = static_cast<T>(c);
  return unary<T>("scale", x, [k](T v) { return v * k; }, [k](T, T) { return k; });
}

template <typename T>
Tensor<T> add_scalar(const Tensor<T> &x, double c) {
  const T k = static_cast<T>(c);
  return unary<T>("add_scalar", x, [k](T v) { return v + k; }, [](T, T) { return T(1); });
}

template <typename T>
Tensor<T> sigmoid(const Tensor<T> &x) {
  return unary<T>(
      "sigmoid", x,
      [](T v) {
        if (v >= T(0)) return T(1) / (T(1) + std::exp(-v));
        const T e = std::exp(v);
        return e / (T(1) + e);
      },
      [](T, T y) { return y * (T(1) - y); });
}

template <typename T>
Tensor<T> tanh(const Tensor<T> &x) {
  return unary<T>(
      "tanh", x, [](T v) { return std::tanh(v); }, [](T, T y) { return T(1) - y * y; });
}

template <typename T>
Tensor<T> relu(const Tensor<T> &x) {
  if (active_trace != nullptr) {
    for (T v : x.values()) active_trace->record(v > T(0));
  }
  return unary<T>(
      "relu", x, [](T v) { return v > T(0) ? v : T(0); },
      [](T in, T) { return in > T(0) ? T(1) : T(0); });
}

template <typename T>
Tensor<T> dropout(const Tensor<T> &x, double p, Rng *rng, bool train) {
  if (!train || p == 0.0) return x;
  if (p < 0.0 || p >= 1.0) throw ContractError("dropout probability must be in [0,1)");
  if (rng == nullptr) throw ContractError("dropout in train mode needs an Rng");
  const double keep = 1.0 - p;
  auto mask = std::make_shared<std::vector<T>>(x.size());
  std::vector<T> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    (*mask)[i] = rng->uniform() < keep ? static_cast<T>(1.0 / keep) : T(0);
    out[i] = x[i] * (*mask)[i];
  }
  return make_op<T>("dropout", x.shape(), std::move(out), {x.shared()},
                    [mask](detail::Node<T> &self) {
                      auto &in = *self.inputs[0];
                      for (std::size_t i = 0; i < self.grad.size(); ++i) {
                        in.grad[i] += self.grad[i] * (*mask)[i];
                      }
                    });
}

// --- reductions -------------------------------------------------------------

template <typename T>
Tensor<T> sum(const Tensor<T> &x) {
  double s = 0.0;
  for (T v : x.values()) s += v;
  return make_op<T>("sum", {1}, {static_cast<T>(s)}, {x.shared()}, [](detail::Node<T> &self) {
    auto &in = *self.inputs[0];
    for (auto &g : in.grad) g += self.grad[0];
  });
}

template <typename T>
Tensor<T> mean(const Tensor<T> &x) {
  if (x.size() == 0) throw ShapeError("mean of an empty tensor");
  double s = 0.0;
  for (T v : x.values()) s += v;
  const double n = static_cast<double>(x.size());
  return make_op<T>("mean", {1}, {static_cast<T>(s / n)}, {x.shared()},
                    [n](detail::Node<T> &self) {
                      auto &in = *self.inputs[0];
                      const T share = static_cast<T>(self.grad[0] / n);
                      for (auto &g : in.grad) g += share;
                    });
}

template <typename T>
Tensor<T> row_mean(const Tensor<T> &x) {
  expect_rank(x, 2, "row_mean");
  const std::size_t n = x.rows(), d = x.cols();
  if (n == 0) throw ShapeError("row_mean of zero rows");
  std::vector<double> acc(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) acc[j] += x.values()[i * d + j];
  }
  std::vector<T> out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = static_cast<T>(acc[j] / static_cast<double>(n));
  return make_op<T>("row_mean", {d}, std::move(out), {x.shared()}, [n, d](detail::Node<T> &self) {
    auto &in = *self.inputs[0];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        in.grad[i * d + j] += static_cast<T>(self.grad[j] / static_cast<double>(n));
      }
    }
  });
}

template <typename T>
Tensor<T> segment_mean(const Tensor<T> &x, std::shared_ptr<const Segments> groups) {
  expect_rank(x, 2, "segment_mean");
  const std::size_t d = x.cols(), g_count = groups->size();
  std::vector<T> out(g_count * d);
  std::vector<double> acc(d);
  auto xv = x.values();
  for (std::size_t g = 0; g < g_count; ++g) {
    const auto begin = groups->offsets[g], end = groups->offsets[g + 1];
    if (begin == end) throw ShapeError("segment_mean: empty group " + std::to_string(g));
    std::fill(acc.begin(), acc.end(), 0.0);
    for (auto m = begin; m < end; ++m) {
      const auto r = groups->members[m];
      if (r >= x.rows()) throw ShapeError("segment_mean: row index out of range");
      const T *src = xv.data() + static_cast<std::size_t>(r) * d;
      for (std::size_t j = 0; j < d; ++j) acc[j] += src[j];
    }
    const double count = static_cast<double>(end - begin);
    for (std::size_t j = 0; j < d; ++j) out[g * d + j] = static_cast<T>(acc[j] / count);
  }
  return make_op<T>("segment_mean", {g_count, d}, std::move(out), {x.shared()},
                    [groups, d](detail::Node<T> &self) {
                      auto &in = *self.inputs[0];
                      for (std::size_t g = 0; g < groups->size(); ++g) {
                        const auto begin = groups->offsets[g], end = groups->offsets[g + 1];
                        const double count = static_cast<double>(end - begin);
                        const T *gr = self.grad.data() + g * d;
                        for (auto m = begin; m < end; ++m) {
                          T *dst = in.grad.data() + static_cast<std::size_t>(groups->members[m]) * d;
                          for (std::size_t j = 0; j < d; ++j) {
                            dst[j] += static_cast<T>(gr[j] / count);
                          }
                        }
                      }
                    });
}

// --- reshaping --------------------------------------------------------------

template <typename T>
Tensor<T> gather_rows(const Tensor<T> &x, std::span<const std::uint32_t> rows) {
  expect_rank(x, 2, "gather_rows");
  const std::size_t d = x.cols();
  auto idx = std::make_shared<std::vector<std::uint32_t>>(rows.begin(), rows.end());
  std::vector<T> out(idx->size() * d);
  for (std::size_t r = 0; r < idx->size(); ++r) {
    if ((*idx)[r] >= x.rows()) throw ShapeError("gather_rows: row index out of range");
    std::copy_n(x.values().data() + static_cast<std::size_t>((*idx)[r]) * d, d,
                out.data() + r * d);
  }
  return make_op<T>("gather_rows", {idx->size(), d}, std::move(out), {x.shared()},
                    [idx, d](detail::Node<T> &self) {
                      auto &in = *self.inputs[0];
                      for (std::size_t r = 0; r < idx->size(); ++r) {
                        T *dst = in.grad.data() + static_cast<std::size_t>((*idx)[r]) * d;
                        for (std::size_t j = 0; j < d; ++j) dst[j] += self.grad[r * d + j];
                      }
                    });
}

template <typename T>
Tensor<T> row(const Tensor<T> &x, std::size_t i) {
  expect_rank(x, 2, "row");
  if (i >= x.rows()) throw ShapeError("row: index out of range");
  const std::size_t d = x.cols();
  std::vector<T> out(x.values().begin() + i * d, x.values().begin() + (i + 1) * d);
  return make_op<T>("row", {d}, std::move(out), {x.shared()}, [i, d](detail::Node<T> &self) {
    auto &in = *self.inputs[0];
    for (std::size_t j = 0; j < d; ++j) in.grad[i * d + j] += self.grad[j];
  });
}

template <typename T>
Tensor<T> column(const Tensor<T> &x, std::size_t j) {
  expect_rank(x, 2, "column");
  if (j >= x.cols()) throw ShapeError("column: index out of range");
  const std::size_t n = x.rows(), k = x.cols();
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x.values()[i * k + j];
  return make_op<T>("column", {n}, std::move(out), {x.shared()}, [j, n, k](detail::Node<T> &self) {
    auto &in = *self.inputs[0];
    for (std::size_t i = 0; i < n; ++i) in.grad[i * k + j] += self.grad[i];
  });
}

template <typename T>
Tensor<T> concat(std::span<const Tensor<T>> parts) {
  if (parts.empty()) throw ShapeError("concat of nothing");
  std::vector<T> out;
  std::vector<NodePtr<T>> inputs;
  for (const auto &p : parts) {
    expect_rank(p, 1, "concat");
    out.insert(out.end(), p.values().begin(), p.values().end());
    inputs.push_back(p.shared());
  }
  const std::size_t total = out.size();
  return make_op<T>("concat", {total}, std::move(out), std::move(inputs),
                    [](detail::Node<T> &self) {
                      std::size_t offset = 0;
                      for (auto &in : self.inputs) {
                        if (in->requires_grad) {
                          for (std::size_t i = 0; i < in->value.size(); ++i) {
                            in->grad[i] += self.grad[offset + i];
                          }
                        }
                        offset += in->value.size();
                      }
                    });
}

template <typename T>
Tensor<T> stack_rows(std::span<const Tensor<T>> rows) {
  if (rows.empty()) throw ShapeError("stack_rows of nothing");
  const std::size_t d = rows[0].size();
  std::vector<T> out;
  out.reserve(rows.size() * d);
  std::vector<NodePtr<T>> inputs;
  for (const auto &r : rows) {
    expect_rank(r, 1, "stack_rows");
    if (r.size() != d) throw ShapeError("stack_rows: ragged rows");
    out.insert(out.end(), r.values().begin(), r.values().end());
    inputs.push_back(r.shared());
  }
  return make_op<T>("stack_rows", {rows.size(), d}, std::move(out), std::move(inputs),
                    [d](detail::Node<T> &self) {
                      for (std::size_t r = 0; r < self.inputs.size(); ++r) {
                        auto &in = *self.inputs[r];
                        if (!in.requires_grad) continue;
                        for (std::size_t j = 0; j < d; ++j) in.grad[j] += self.grad[r * d + j];
                      }
                    });
}

template <typename T>
Tensor<T> stack_columns(std::span<const Tensor<T>> cols) {
  if (cols.empty()) throw ShapeError("stack_columns of nothing");
  const std::size_t n = cols[0].size(), k = cols.size();
  std::vector<T> out(n * k);
  std::vector<NodePtr<T>> inputs;
  for (std::size_t c = 0; c < k; ++c) {
    expect_rank(cols[c], 1, "stack_columns");
    if (cols[c].size() != n) throw ShapeError("stack_columns: ragged columns");
    for (std::size_t i = 0; i < n; ++i) out[i * k + c] = cols[c][i];
    inputs.push_back(cols[c].shared());
  }
  return make_op<T>("stack_columns", {n, k}, std::move(out), std::move(inputs),
                    [n, k](detail::Node<T> &self) {
                      for (std::size_t c = 0; c < k; ++c) {
                        auto &in = *self.inputs[c];
                        if (!in.requires_grad) continue;
                        for (std::size_t i = 0; i < n; ++i) in.grad[i] += self.grad[i * k + c];
                      }
                    });
}

template <typename T>
Tensor<T> slice(const Tensor<T> &x, std::size_t offset, std::size_t length) {
  expect_rank(x, 1, "slice");
  if (offset + length > x.size()) throw ShapeError("slice: range out of bounds");
  std::vector<T> out(x.values().begin() + offset, x.values().begin() + offset + length);
  return make_op<T>("slice", {length}, std::move(out), {x.shared()},
                    [offset, length](detail::Node<T> &self) {
                      auto &in = *self.inputs[0];
                      for (std::size_t i = 0; i < length; ++i) in.grad[offset + i] += self.grad[i];
                    });
}

// --- normalizers and similarities ---------------------------------------------

namespace {

template <typename T>
void softmax_span(const T *x, T *y, std::size_t k) {
  T mx = x[0];
  for (std::size_t i = 1; i < k; ++i) mx = std::max(mx, x[i]);
  double total = 0.0;
  std::vector<double> e(k);
  for (std::size_t i = 0; i < k; ++i) {
    e[i] = std::exp(static_cast<double>(x[i]) - static_cast<double>(mx));
    total += e[i];
  }
  for (std::size_t i = 0; i < k; ++i) y[i] = static_cast<T>(e[i] / total);
}

template <typename T>
void softmax_backward_span(const T *y, const T *gy, T *gx, std::size_t k) {
  double dot = 0.0;
  for (std::size_t i = 0; i < k; ++i) dot += static_cast<double>(gy[i]) * y[i];
  for (std::size_t i = 0; i < k; ++i) gx[i] += static_cast<T>(y[i] * (gy[i] - dot));
}

struct CosineParts {
  double dot, nu, nv;
  double value() const { return dot / ((nu + kCosineEps) * (nv + kCosineEps)); }
};

template <typename T>
CosineParts cosine_parts(const T *u, const T *v, std::size_t d) {
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    dot += static_cast<double>(u[i]) * v[i];
    uu += static_cast<double>(u[i]) * u[i];
    vv += static_cast<double>(v[i]) * v[i];
  }
  return {dot, std::sqrt(uu), std::sqrt(vv)};
}

// Adds g * d(cos)/du to gu (and the symmetric term to gv when non-null).
template <typename T>
void cosine_backward(const T *u, const T *v, const CosineParts &c, double g, T *gu, double *gv,
                     std::size_t d) {
  const double du = c.nu + kCosineEps, dv = c.nv + kCosineEps;
  const double inv = 1.0 / (du * dv);
  const double ku = c.nu > 0.0 ? c.dot / (du * du * dv * c.nu) : 0.0;
  const double kv = c.nv > 0.0 ? c.dot / (du * dv * dv * c.nv) : 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    if (gu) gu[i] += static_cast<T>(g * (v[i] * inv - ku * u[i]));
    if (gv) gv[i] += g * (u[i] * inv - kv * v[i]);
  }
}

}  // namespace

template <typename T>
Tensor<T> softmax(const Tensor<T> &x) {
  expect_rank(x, 1, "softmax");
  const std::size_t k = x.size();
  if (k == 0) throw ShapeError("softmax of an empty vector");
  std::vector<T> out(k);
  softmax_span(x.values().data(), out.data(), k);
  return make_op<T>("softmax", {k}, std::move(out), {x.shared()}, [k](detail::Node<T> &self) {
    softmax_backward_span(self.value.data(), self.grad.data(), self.inputs[0]->grad.data(), k);
  });
}

template <typename T>
Tensor<T> softmax_rows(const Tensor<T> &x) {
  expect_rank(x, 2, "softmax_rows");
  const std::size_t n = x.rows(), k = x.cols();
  std::vector<T> out(n * k);
  for (std::size_t i = 0; i < n; ++i) softmax_span(x.values().data() + i * k, out.data() + i * k, k);
  return make_op<T>("softmax_rows", {n, k}, std::move(out), {x.shared()},
                    [n, k](detail::Node<T> &self) {
                      for (std::size_t i = 0; i < n; ++i) {
                        softmax_backward_span(self.value.data() + i * k, self.grad.data() + i * k,
                                              self.inputs[0]->grad.data() + i * k, k);
                      }
                    });
}

template <typename T>
Tensor<T> cosine(const Tensor<T> &u, const Tensor<T> &v) {
  expect_rank(u, 1, "cosine");
  expect_same(u, v, "cosine");
  const std::size_t d = u.size();
  const CosineParts c = cosine_parts(u.values().data(), v.values().data(), d);
  return make_op<T>("cosine", {1}, {static_cast<T>(c.value())}, {u.shared(), v.shared()},
                    [c, d](detail::Node<T> &self) {
                      auto &u = *self.inputs[0];
                      auto &v = *self.inputs[1];
                      const double g = self.grad[0];
                      if (u.requires_grad) {
                        cosine_backward<T>(u.value.data(), v.value.data(), c, g, u.grad.data(),
                                           nullptr, d);
                      }
                      if (v.requires_grad) {
                        CosineParts swapped{c.dot, c.nv, c.nu};
                        cosine_backward<T>(v.value.data(), u.value.data(), swapped, g,
                                           v.grad.data(), nullptr, d);
                      }
                    });
}

template <typename T>
Tensor<T> cosine_rows(const Tensor<T> &x, const Tensor<T> &a) {
  expect_rank(x, 2, "cosine_rows");
  expect_rank(a, 1, "cosine_rows");
  const std::size_t n = x.rows(), d = x.cols();
  if (a.size() != d) {
    throw ShapeError("cosine_rows: shape mismatch " + shape_string(x.shape()) + " vs " +
                     shape_string(a.shape()));
  }
  auto parts = std::make_shared<std::vector<CosineParts>>(n);
  std::vector<T> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    (*parts)[i] = cosine_parts(x.values().data() + i * d, a.values().data(), d);
    out[i] = static_cast<T>((*parts)[i].value());
  }
  return make_op<T>("cosine_rows", {n}, std::move(out), {x.shared(), a.shared()},
                    [parts, n, d](detail::Node<T> &self) {
                      auto &x = *self.inputs[0];
                      auto &a = *self.inputs[1];
                      std::vector<double> ga(d, 0.0);
                      for (std::size_t i = 0; i < n; ++i) {
                        const double g = self.grad[i];
                        const T *xi = x.value.data() + i * d;
                        if (x.requires_grad) {
                          cosine_backward<T>(xi, a.value.data(), (*parts)[i], g,
                                             x.grad.data() + i * d, nullptr, d);
                        }
                        if (a.requires_grad) {
                          cosine_backward<T>(xi, a.value.data(), (*parts)[i], g, nullptr,
                                             ga.data(), d);
                        }
                      }
                      if (a.requires_grad) {
                        for (std::size_t j = 0; j < d; ++j) a.grad[j] += static_cast<T>(ga[j]);
                      }
                    });
}

template <typename T>
Tensor<T> scale_rows(const Tensor<T> &x, const Tensor<T> &s) {
  expect_rank(x, 2, "scale_rows");
  expect_rank(s, 1, "scale_rows");
  const std::size_t n = x.rows(), d = x.cols();
  if (s.size() != n) {
    throw ShapeError("scale_rows: shape mismatch " + shape_string(x.shape()) + " vs " +
                     shape_string(s.shape()));
  }
  std::vector<T> out(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = x.values()[i * d + j] * s[i];
  }
  return make_op<T>("scale_rows", {n, d}, std::move(out), {x.shared(), s.shared()},
                    [n, d](detail::Node<T> &self) {
                      auto &x = *self.inputs[0];
                      auto &s = *self.inputs[1];
                      for (std::size_t i = 0; i < n; ++i) {
                        double gs = 0.0;
                        for (std::size_t j = 0; j < d; ++j) {
                          const T g = self.grad[i * d + j];
                          if (x.requires_grad) x.grad[i * d + j] += g * s.value[i];
                          gs += static_cast<double>(g) * x.value[i * d + j];
                        }
                        if (s.requires_grad) s.grad[i] += static_cast<T>(gs);
                      }
                    });
}

template <typename T>
Tensor<T> cross_entropy(const Tensor<T> &probs, std::size_t label) {
  expect_rank(probs, 1, "cross_entropy");
  if (label >= probs.size()) throw ShapeError("cross_entropy: label out of range");
  const T p = probs[label];
  return make_op<T>("cross_entropy", {1}, {static_cast<T>(-std::log(p))}, {probs.shared()},
                    [label](detail::Node<T> &self) {
                      auto &in = *self.inputs[0];
                      in.grad[label] -= self.grad[0] / in.value[label];
                    });
}

#define HINPAIR_INSTANTIATE(T)                                                           \
  template class Tensor<T>;                                                              \
  template void backward<T>(const Tensor<T> &);                                          \
  template Tensor<T> matmul<T>(const Tensor<T> &, const Tensor<T> &);                    \
  template Tensor<T> linear<T>(const Tensor<T> &, const Tensor<T> &, const Tensor<T> &); \
  template Tensor<T> add<T>(const Tensor<T> &, const Tensor<T> &);                       \
  template Tensor<T> sub<T>(const Tensor<T> &, const Tensor<T> &);                       \
  template Tensor<T> mul<T>(const Tensor<T> &, const Tensor<T> &);                       \
  template Tensor<T> scale<T>(const Tensor<T> &, double);                                \
  template Tensor<T> add_scalar<T>(const Tensor<T> &, double);                           \
  template Tensor<T> sigmoid<T>(const Tensor<T> &);                                      \
  template Tensor<T> tanh<T>(const Tensor<T> &);                                         \
  template Tensor<T> relu<T>(const Tensor<T> &);                                         \
  template Tensor<T> dropout<T>(const Tensor<T> &, double, Rng *, bool);                 \
  template Tensor<T> sum<T>(const Tensor<T> &);                                          \
  template Tensor<T> mean<T>(const Tensor<T> &);                                         \
  template Tensor<T> row_mean<T>(const Tensor<T> &);                                     \
  template Tensor<T> segment_mean<T>(const Tensor<T> &, std::shared_ptr<const Segments>); \
  template Tensor<T> gather_rows<T>(const Tensor<T> &, std::span<const std::uint32_t>);  \
  template Tensor<T> row<T>(const Tensor<T> &, std::size_t);                             \
  template Tensor<T> column<T>(const Tensor<T> &, std::size_t);                          \
  template Tensor<T> concat<T>(std::span<const Tensor<T>>);                              \
  template Tensor<T> stack_rows<T>(std::span<const Tensor<T>>);                          \
  template Tensor<T> stack_columns<T>(std::span<const Tensor<T>>);                       \
  template Tensor<T> slice<T>(const Tensor<T> &, std::size_t, std::size_t);              \
  template Tensor<T> softmax<T>(const Tensor<T> &);                                      \
  template Tensor<T> softmax_rows<T>(const Tensor<T> &);                                 \
  template Tensor<T> cosine<T>(const Tensor<T> &, const Tensor<T> &);                    \
  template Tensor<T> cosine_rows<T>(const Tensor<T> &, const Tensor<T> &);               \
  template Tensor<T> scale_rows<T>(const Tensor<T> &, const Tensor<T> &);                \
  template Tensor<T> cross_entropy<T>(const Tensor<T> &, std::size_t);

HINPAIR_INSTANTIATE(float)
HINPAIR_INSTANTIATE(double)

#undef HINPAIR_INSTANTIATE

}  // namespace hinpair
