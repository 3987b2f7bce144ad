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

#include "namedis/model.hpp"

#include <array>
#include <cmath>

#include "namedis/rng.hpp"

namespace namedis {

Tensor::Tensor(std::string n, Eigen::Index rows, Eigen::Index cols)
    : name(std::move(n)),
      value(Matrix::Zero(rows, cols)),
      grad(Matrix::Zero(rows, cols)),
      first_moment(Matrix::Zero(rows, cols)),
      second_moment(Matrix::Zero(rows, cols)) {}

bool Tensor::is_bias() const { return name.ends_with(".bias"); }

void GatConfig::validate() const {
  if (input_dim < 1 || hidden1 < 1 || hidden2 < 1 || heads < 1) {
    throw std::invalid_argument("encoder dimensions must be positive");
  }
  if (hidden1 % heads != 0) throw std::invalid_argument("hidden1 must be divisible by heads");
}

GatEncoder::GatEncoder(GatConfig cfg) : cfg_(cfg) { cfg_.validate(); }

std::vector<TensorShape> GatEncoder::parameter_shapes() const {
  std::vector<TensorShape> shapes;
  const int head_dim = cfg_.hidden1 / cfg_.heads;
  for (int h = 0; h < cfg_.heads; ++h) {
    const std::string p = "gat1.head" + std::to_string(h);
    shapes.push_back({p + ".weight", head_dim, cfg_.input_dim, true});
    shapes.push_back({p + ".bias", 1, head_dim, false});
    shapes.push_back({p + ".attention", 2 * head_dim, 1, true});
  }
  shapes.push_back({"gat2.weight", cfg_.hidden2, cfg_.hidden1, true});
  shapes.push_back({"gat2.bias", 1, cfg_.hidden2, false});
  shapes.push_back({"gat2.attention", 2 * cfg_.hidden2, 1, true});
  return shapes;
}

ad::Var gat_layer(ad::Tape& tape, ad::Var h_in, const Matrix& adjacency,
                  std::span<const GatHeadVars> heads, bool activate, double negative_slope,
                  double elu_alpha, AttentionTrace* trace) {
  (void)tape;
  std::vector<ad::Var> outputs;
  outputs.reserve(heads.size());
  for (const auto& head : heads) {
    const ad::Var z = ad::matmul_nt(h_in, head.weight);
    const ad::Var alpha = ad::attention(z, head.attention, adjacency, negative_slope);
    if (trace) {
      const Matrix& zv = z.value();
      const Eigen::Index o = zv.cols();
      const Matrix& c = head.attention.value();
      const Eigen::VectorXd left = zv * c.topRows(o);
      const Eigen::VectorXd right = zv * c.bottomRows(o);
      trace->weights.push_back(alpha.value());
      trace->scores.push_back(left.replicate(1, zv.rows()) + right.transpose().replicate(zv.rows(), 1));
    }
    outputs.push_back(ad::add_row(ad::matmul(alpha, z), head.bias));
  }
  ad::Var out = outputs.size() == 1 ? outputs.front() : ad::concat_cols(outputs);
  if (trace && activate) trace->pre_activation.push_back(out.value());
  return activate ? ad::elu(out, elu_alpha) : out;
}

ad::Var GatEncoder::encode(ad::Tape& tape, std::span<const ad::Var> params, ad::Var x,
                           const Matrix& adjacency, AttentionTrace* trace) const {
  const std::size_t expected = 3 * static_cast<std::size_t>(cfg_.heads) + 3;
  if (params.size() != expected) throw std::invalid_argument("GAT encoder: wrong parameter count");
  std::vector<GatHeadVars> first;
  for (int h = 0; h < cfg_.heads; ++h) {
    first.push_back({params[3 * h], params[3 * h + 1], params[3 * h + 2]});
  }
  const ad::Var h1 = gat_layer(tape, x, adjacency, first, true, cfg_.negative_slope,
                               cfg_.elu_alpha, trace);
  const std::size_t k = 3 * static_cast<std::size_t>(cfg_.heads);
  const GatHeadVars second{params[k], params[k + 1], params[k + 2]};
  return gat_layer(tape, h1, adjacency, std::span(&second, 1), cfg_.activate_output,
                   cfg_.negative_slope, cfg_.elu_alpha, trace);
}

ad::Var decoder_logits(ad::Var h) { return ad::matmul_nt(h, h); }

ad::Var decode(ad::Var h) { return ad::sigmoid(decoder_logits(h)); }

ClusterHeadOutput cluster_head(ad::Var h, const ClusterHeadVars& head) {
  ad::Tape& tape = *h.tape();
  const ad::Var c = ad::add_row(ad::matmul_nt(h, head.weight), head.bias);
  const double n = static_cast<double>(h.rows());
  const double m = static_cast<double>(head.weight.rows());
  const double k = static_cast<double>(h.cols()) + 1.0;
  if (n * n * m <= (m + n) * k * k + n * n * k) return {c, ad::matmul_nt(c, c)};
  // C = [H 1][W b^T]^T, so C C^T = [H 1] G [H 1]^T with the k x k Gram matrix
  // G of [W b^T]: O(n^2 k + (n + m) k^2) instead of O(n^2 m).
  const std::array<ad::Var, 2> h_parts{h, tape.constant(Matrix::Ones(h.rows(), 1))};
  const std::array<ad::Var, 2> w_parts{head.weight, ad::transpose(head.bias)};
  const ad::Var h_aug = ad::concat_cols(h_parts);
  const ad::Var w_aug = ad::concat_cols(w_parts);
  const ad::Var g = ad::matmul(ad::transpose(w_aug), w_aug);
  return {c, ad::matmul_nt(ad::matmul(h_aug, g), h_aug)};
}

ad::Var recon_loss(ad::Var logits, const Matrix& adjacency) {
  return ad::logistic_cross_entropy(logits, adjacency);
}

ad::Var cluster_loss(ad::Var cmat, const Matrix& label_adjacency) {
  return ad::logistic_cross_entropy(cmat, label_adjacency);
}

std::vector<Tensor*> ModelParams::tensors() {
  std::vector<Tensor*> out;
  for (auto& t : encoder) out.push_back(&t);
  out.push_back(&cluster_weight);
  out.push_back(&cluster_bias);
  return out;
}

std::vector<const Tensor*> ModelParams::tensors() const {
  std::vector<const Tensor*> out;
  for (const auto& t : encoder) out.push_back(&t);
  out.push_back(&cluster_weight);
  out.push_back(&cluster_bias);
  return out;
}

void ModelParams::zero_grad() {
  for (auto* t : tensors()) t->grad.setZero();
}

bool ModelParams::all_finite() const {
  for (const auto* t : tensors()) {
    if (!t->value.allFinite()) return false;
  }
  return true;
}

namespace {

void xavier_fill(Tensor& t, Rng& rng) {
  const double bound =
      std::sqrt(6.0 / static_cast<double>(t.value.rows() + t.value.cols()));
  for (Eigen::Index r = 0; r < t.value.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.value.cols(); ++c) t.value(r, c) = rng.uniform(-bound, bound);
  }
}

}  // namespace

ModelParams init_params(const Encoder& encoder, int cluster_dim, std::uint64_t seed) {
  if (cluster_dim < 1) throw std::invalid_argument("cluster head needs at least one output");
  Rng rng(derive_seed(seed, "init"));
  ModelParams p;
  for (const auto& s : encoder.parameter_shapes()) {
    p.encoder.emplace_back(s.name, s.rows, s.cols);
    if (s.xavier) xavier_fill(p.encoder.back(), rng);
  }
  p.cluster_weight = Tensor("cluster.weight", cluster_dim, encoder.output_dim());
  xavier_fill(p.cluster_weight, rng);
  p.cluster_bias = Tensor("cluster.bias", 1, cluster_dim);
  return p;
}

void optimizer_step(ModelParams& params, const AdamConfig& cfg) {
  const int step = params.optimizer_steps + 1;
  const double c1 = 1.0 - std::pow(cfg.beta1, step);
  const double c2 = 1.0 - std::pow(cfg.beta2, step);
  for (auto* t : params.tensors()) {
    const Matrix g = t->grad + cfg.weight_decay * t->value;
    t->first_moment = cfg.beta1 * t->first_moment + (1.0 - cfg.beta1) * g;
    t->second_moment = cfg.beta2 * t->second_moment + (1.0 - cfg.beta2) * g.cwiseAbs2();
    const Matrix update =
        cfg.lr * (t->first_moment / c1).array() / ((t->second_moment / c2).array().sqrt() + cfg.eps);
    if (!update.allFinite()) throw NumericError("non-finite optimizer update in " + t->name);
    t->value -= update;
  }
  params.optimizer_steps = step;
}

BoundParams bind(ad::Tape& tape, const ModelParams& params) {
  BoundParams b;
  for (const auto& t : params.encoder) b.encoder.push_back(tape.variable(t.value));
  b.head.weight = tape.variable(params.cluster_weight.value);
  b.head.bias = tape.variable(params.cluster_bias.value);
  return b;
}

void collect_gradients(const BoundParams& bound, ModelParams& params) {
  const auto copy = [](const ad::Var& v, Tensor& t) {
    if (v.grad().size() == 0) {
      t.grad.setZero();
    } else {
      t.grad = v.grad();
    }
  };
  for (std::size_t k = 0; k < params.encoder.size(); ++k) copy(bound.encoder[k], params.encoder[k]);
  copy(bound.head.weight, params.cluster_weight);
  copy(bound.head.bias, params.cluster_bias);
}

ForwardPass forward(ad::Tape& tape, const Encoder& encoder, const BoundParams& bound,
                    const Matrix& features, const Matrix& adjacency, AttentionTrace* trace) {
  const ad::Var x = tape.constant(features);
  ForwardPass f;
  f.h = encoder.encode(tape, bound.encoder, x, adjacency, trace);
  const auto head = cluster_head(f.h, bound.head);
  f.c = head.c;
  f.cmat = head.gram;
  f.a_logits = decoder_logits(f.h);
  f.a_hat = ad::sigmoid(f.a_logits);
  return f;
}

}  // namespace namedis
