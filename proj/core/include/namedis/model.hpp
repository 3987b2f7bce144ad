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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "namedis/autodiff.hpp"

namespace namedis {

using ad::Matrix;

/// A trainable tensor with its gradient slot and Adam moments.
struct Tensor {
  std::string name;
  Matrix value;
  Matrix grad;
  Matrix first_moment;
  Matrix second_moment;

  Tensor() = default;
  Tensor(std::string n, Eigen::Index rows, Eigen::Index cols);
  bool is_bias() const;
};

struct TensorShape {
  std::string name;
  Eigen::Index rows;
  Eigen::Index cols;
  bool xavier;  // false: zero-initialized bias
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AttentionTrace {
  // One n x n matrix per head and layer, in layer order.
  std::vector<Matrix> weights;
  // Attention scores before the LeakyReLU, same layout as `weights`.
  std::vector<Matrix> scores;
  // Layer outputs before the ELU, one per activated layer.
  std::vector<Matrix> pre_activation;
};

/// Encoder interface: maps node features and adjacency to hidden
/// representations using a flat list of parameter tensors whose layout the
/// encoder itself defines.
class Encoder {
 public:
  virtual ~Encoder() = default;
  virtual std::vector<TensorShape> parameter_shapes() const = 0;
  virtual int output_dim() const = 0;
  virtual ad::Var encode(ad::Tape& tape, std::span<const ad::Var> params, ad::Var x,
                         const Matrix& adjacency, AttentionTrace* trace) const = 0;
  virtual std::unique_ptr<Encoder> clone() const = 0;
};

struct GatConfig {
  int input_dim = 100;
  int hidden1 = 128;  // concatenated width of the first layer's heads
  int hidden2 = 128;
  int heads = 4;
  double negative_slope = 0.2;
  double elu_alpha = 1.0;
  bool activate_output = true;

  void validate() const;
};

/// Two graph-attention layers: `heads` concatenated heads, then a single head.
class GatEncoder final : public Encoder {
 public:
  explicit GatEncoder(GatConfig cfg);

  std::vector<TensorShape> parameter_shapes() const override;
  int output_dim() const override { return cfg_.hidden2; }
  ad::Var encode(ad::Tape& tape, std::span<const ad::Var> params, ad::Var x,
                 const Matrix& adjacency, AttentionTrace* trace) const override;
  std::unique_ptr<Encoder> clone() const override { return std::make_unique<GatEncoder>(*this); }
  const GatConfig& config() const { return cfg_; }

 private:
  GatConfig cfg_;
};

struct GatHeadVars {
  ad::Var weight;     // out x in
  ad::Var bias;       // 1 x out
  ad::Var attention;  // 2*out x 1
};

/// One attention layer: per head, z = H W^T, attention weights from z, output
/// alpha z + b; heads concatenated, then ELU when `activate`.
ad::Var gat_layer(ad::Tape& tape, ad::Var h_in, const Matrix& adjacency,
                  std::span<const GatHeadVars> heads, bool activate, double negative_slope,
                  double elu_alpha, AttentionTrace* trace);

/// sigmoid(H H^T).
ad::Var decode(ad::Var h);

/// H H^T, the decoder before its sigmoid.
ad::Var decoder_logits(ad::Var h);

struct ClusterHeadVars {
  ad::Var weight;  // m x d
  ad::Var bias;    // 1 x m
};

struct ClusterHeadOutput {
  ad::Var c;     // n x m
  ad::Var gram;  // n x n, C C^T
};

ClusterHeadOutput cluster_head(ad::Var h, const ClusterHeadVars& head);

/// Mean cross-entropy between sigmoid(logits) and the 0/1 adjacency, where
/// logits = decoder_logits(H), i.e. the reconstruction Â = decode(H).
ad::Var recon_loss(ad::Var logits, const Matrix& adjacency);

/// Mean cross-entropy between sigmoid(Cmat) and the pseudo-label alignment matrix.
ad::Var cluster_loss(ad::Var cmat, const Matrix& label_adjacency);

/// Parameters of the full model: encoder tensors in the encoder's layout plus
/// the cluster head.
struct ModelParams {
  std::vector<Tensor> encoder;
  Tensor cluster_weight;
  Tensor cluster_bias;
  int optimizer_steps = 0;

  std::vector<Tensor*> tensors();
  std::vector<const Tensor*> tensors() const;
  void zero_grad();
  bool all_finite() const;
  int cluster_dim() const { return static_cast<int>(cluster_weight.value.rows()); }
};

/// Xavier-uniform weights (bound sqrt(6 / (fan_in + fan_out)), fan_in = cols,
/// fan_out = rows) and zero biases.
ModelParams init_params(const Encoder& encoder, int cluster_dim, std::uint64_t seed);

struct AdamConfig {
  double lr = 1e-3;
  double weight_decay = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One bias-corrected Adam step over every tensor using its grad slot.
/// Weight decay is added to the gradient (L2 form).
void optimizer_step(ModelParams& params, const AdamConfig& cfg);

/// Tape bindings of every parameter tensor for one forward pass.
struct BoundParams {
  std::vector<ad::Var> encoder;
  ClusterHeadVars head;
};

BoundParams bind(ad::Tape& tape, const ModelParams& params);

/// Copies gradients from the tape into the params' grad slots (zero where the
/// loss does not depend on a tensor).
void collect_gradients(const BoundParams& bound, ModelParams& params);

struct ForwardPass {
  ad::Var h;
  ad::Var c;
  ad::Var a_logits;  // H H^T
  ad::Var a_hat;     // sigmoid(a_logits)
  ad::Var cmat;
};

ForwardPass forward(ad::Tape& tape, const Encoder& encoder, const BoundParams& bound,
                    const Matrix& features, const Matrix& adjacency,
                    AttentionTrace* trace = nullptr);

/// Checkpoint layout (little-endian): magic "NDCK", u32 version, u32 layer-1
/// head count, u32 tensor count, then per tensor u32 rows and u32 cols, then
/// every tensor's values as row-major float32.
void save_checkpoint(const ModelParams& params, int heads, const std::filesystem::path& file);

struct Checkpoint {
  ModelParams params;
  GatConfig encoder;
};

Checkpoint load_checkpoint(const std::filesystem::path& file);

}  // namespace namedis
