// Copyright 2026 The namedis Authors
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

#pragma once

#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace namedis::ad {

using Matrix = Eigen::MatrixXd;

class Tape;

/// Handle to a node on a Tape. Cheap to copy; only valid while the tape lives.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  // Empty (0x0) until backward() reaches this node.
  const Matrix& grad() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  int id() const { return id_; }
  Tape* tape() const { return tape_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  int id_ = -1;
};

/// Records matrix-valued operations for one forward pass and replays them in
/// reverse to accumulate gradients of a scalar output.
class Tape {
 public:
  using Pullback = std::function<void(Tape&, int self)>;

  Var variable(Matrix value);
  Var constant(Matrix value);

  /// Seeds d(root)/d(root) = 1 on a 1x1 root and propagates to every node
  /// that depends on a variable.
  void backward(Var root);

  const Matrix& value(int id) const { return nodes_[id].value; }
  const Matrix& grad(int id) const { return nodes_[id].grad; }
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  // Used by operation implementations.
  Var push(Matrix value, std::span<const Var> parents, Pullback pullback);
  Var push(Matrix value, std::initializer_list<Var> parents, Pullback pullback) {
    return push(std::move(value), std::span<const Var>(parents.begin(), parents.size()),
                std::move(pullback));
  }
  void accumulate(int id, const Matrix& g);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    Pullback pullback;
  };
  std::vector<Node> nodes_;
};

Var matmul(Var a, Var b);
// a * b^T
Var matmul_nt(Var a, Var b);
Var add(Var a, Var b);
// Adds the 1 x k row `bias` to every row of the n x k matrix `a`.
Var add_row(Var a, Var bias);
Var scale(Var a, double s);
Var elu(Var a, double alpha = 1.0);
Var sigmoid(Var a);
Var concat_cols(std::span<const Var> parts);
Var transpose(Var a);

/// Masked graph attention weights. With z (n x o) and c (2o x 1):
/// e_ij = LeakyReLU(c_top . z_i + c_bot . z_j), softmax over j where mask_ij != 0.
/// Rows with an empty mask are not allowed.
Var attention(Var z, Var c, const Matrix& mask, double negative_slope);

/// Mean binary cross-entropy between probabilities p and 0/1 targets, with p
/// clamped to [eps, 1 - eps]. Clamped entries pass no gradient.
Var binary_cross_entropy(Var p, const Matrix& target, double eps);

/// Mean binary cross-entropy of sigmoid(logits) against target, evaluated in
/// the overflow-free softplus form. Exact for any logit, so saturated entries
/// keep their gradient (sigmoid(x) - target) / size.
Var logistic_cross_entropy(Var logits, const Matrix& target);

}  // namespace namedis::ad
