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

// Dense row-major tensors with reverse-mode automatic differentiation.
//
// A Tensor is a cheap handle to a graph node. Ops build new nodes that keep
// their inputs alive; backward() walks the graph from a scalar loss and
// accumulates gradients into every node that requires them. Leaves
// (parameters) keep accumulating across backward() calls until zero_grad().
//
// The engine is templated on the scalar type. Training uses float; the
// gradient checker runs the same code at double precision. Reductions
// (products, means, norms) accumulate in double regardless of T.

#ifndef HINPAIR_TENSOR_H_
#define HINPAIR_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace hinpair {

class Rng;

using Shape = std::vector<std::size_t>;

std::string shape_string(const Shape &shape);

namespace detail {

template <typename T>
struct Node {
  Shape shape;
  std::vector<T> value;
  std::vector<T> grad;  // empty unless requires_grad
  bool requires_grad = false;
  const char *op = "leaf";
  std::vector<std::shared_ptr<Node>> inputs;
  std::function<void(Node &)> backward;
};

}  // namespace detail

template <typename T>
class Tensor {
 public:
  using Node = detail::Node<T>;

  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  // Values must match the shape's element count.
  static Tensor constant(Shape shape, std::vector<T> values);
  static Tensor parameter(Shape shape, std::vector<T> values);
  static Tensor zeros(Shape shape);
  static Tensor vector(std::vector<T> values);
  static Tensor scalar(T value);

  bool defined() const { return node_ != nullptr; }
  const Shape &shape() const { return node_->shape; }
  std::size_t rank() const { return node_->shape.size(); }
  std::size_t size() const { return node_->value.size(); }
  // Rank 2 only.
  std::size_t rows() const { return node_->shape[0]; }
  std::size_t cols() const { return node_->shape[1]; }

  std::span<const T> values() const { return node_->value; }
  std::span<T> mutable_values() { return node_->value; }
  std::span<const T> grad() const { return node_->grad; }
  std::span<T> mutable_grad() { return node_->grad; }
  T item() const;
  T operator[](std::size_t i) const { return node_->value[i]; }
  T at(std::size_t i, std::size_t j) const { return node_->value[i * node_->shape[1] + j]; }

  bool requires_grad() const { return node_->requires_grad; }
  void zero_grad();

  Node *node() const { return node_.get(); }
  const std::shared_ptr<Node> &shared() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

// Accumulates d(loss)/d(x) into every reachable tensor requiring gradients.
// Throws ContractError if loss has more than one element.
template <typename T>
void backward(const Tensor<T> &loss);

// --- products -------------------------------------------------------------

// [m,k]x[k,n] -> [m,n]; [m,k]x[k] -> [m].
template <typename T>
Tensor<T> matmul(const Tensor<T> &a, const Tensor<T> &b);

// x W^T + b for x of shape [in] or [n,in], W [out,in], b [out]. bias may be
// an undefined Tensor.
template <typename T>
Tensor<T> linear(const Tensor<T> &x, const Tensor<T> &weight, const Tensor<T> &bias);

// --- elementwise ------------------------------------------------------------

template <typename T>
Tensor<T> add(const Tensor<T> &a, const Tensor<T> &b);
template <typename T>
Tensor<T> sub(const Tensor<T> &a, const Tensor<T> &b);
template <typename T>
Tensor<T> mul(const Tensor<T> &a, const Tensor<T> &b);
template <typename T>
Tensor<T> scale(const Tensor<T> &x, double c);
template <typename T>
Tensor<T> add_scalar(const Tensor<T> &x, double c);

template <typename T>
Tensor<T> sigmoid(const Tensor<T> &x);
template <typename T>
Tensor<T> tanh(const Tensor<T> &x);
template <typename T>
Tensor<T> relu(const Tensor<T> &x);

// Bernoulli keep-mask scaled by 1/(1-p) in train mode; returns x unchanged
// otherwise (or when p == 0).
template <typename T>
Tensor<T> dropout(const Tensor<T> &x, double p, Rng *rng, bool train);

// --- reductions -------------------------------------------------------------

template <typename T>
Tensor<T> sum(const Tensor<T> &x);
template <typename T>
Tensor<T> mean(const Tensor<T> &x);

// Mean over the rows of [n,d] -> [d].
template <typename T>
Tensor<T> row_mean(const Tensor<T> &x);

// Compressed list of row groups: group g is members[offsets[g]..offsets[g+1]).
struct Segments {
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::uint32_t> members;

  std::size_t size() const { return offsets.size() - 1; }
  void add_group(std::span<const std::uint32_t> rows);
};

// Row g of the result is the mean of the rows of x listed in group g.
// Groups must be nonempty.
template <typename T>
Tensor<T> segment_mean(const Tensor<T> &x, std::shared_ptr<const Segments> groups);

// --- reshaping --------------------------------------------------------------

template <typename T>
Tensor<T> gather_rows(const Tensor<T> &x, std::span<const std::uint32_t> rows);
// Row i of [n,d] as a vector [d].
template <typename T>
Tensor<T> row(const Tensor<T> &x, std::size_t i);
// Column j of [n,d] as a vector [n].
template <typename T>
Tensor<T> column(const Tensor<T> &x, std::size_t j);
// Concatenation of vectors.
template <typename T>
Tensor<T> concat(std::span<const Tensor<T>> parts);
// Vectors [d] -> matrix [n,d].
template <typename T>
Tensor<T> stack_rows(std::span<const Tensor<T>> rows);
// Vectors [n] -> matrix [n,k].
template <typename T>
Tensor<T> stack_columns(std::span<const Tensor<T>> cols);
template <typename T>
Tensor<T> slice(const Tensor<T> &x, std::size_t offset, std::size_t length);

// --- normalizers and similarities ---------------------------------------------

// Max-subtracted softmax of a vector.
template <typename T>
Tensor<T> softmax(const Tensor<T> &x);
// Softmax of every row of [n,k].
template <typename T>
Tensor<T> softmax_rows(const Tensor<T> &x);

inline constexpr double kCosineEps = 1e-12;

// u.v / ((|u|+eps)(|v|+eps)), a scalar.
template <typename T>
Tensor<T> cosine(const Tensor<T> &u, const Tensor<T> &v);
// Cosine of every row of [n,d] against the vector a [d] -> [n].
template <typename T>
Tensor<T> cosine_rows(const Tensor<T> &x, const Tensor<T> &a);
// Scales row i of [n,d] by s[i].
template <typename T>
Tensor<T> scale_rows(const Tensor<T> &x, const Tensor<T> &s);

// -log(p[label]) for a probability vector p.
template <typename T>
Tensor<T> cross_entropy(const Tensor<T> &probs, std::size_t label);

// While alive on the current thread, every relu() folds the sign pattern of
// its input into signature(). The gradient checker uses it to skip
// coordinates whose finite-difference stencil straddles a ReLU kink.
class KinkTrace {
 public:
  KinkTrace();
  ~KinkTrace();
  KinkTrace(const KinkTrace &) = delete;
  KinkTrace &operator=(const KinkTrace &) = delete;

  std::uint64_t signature() const { return signature_; }
  void record(bool positive);

 private:
  KinkTrace *previous_;
  std::uint64_t signature_ = 1469598103934665603ULL;
};

}  // namespace hinpair

#endif  // HINPAIR_TENSOR_H_
