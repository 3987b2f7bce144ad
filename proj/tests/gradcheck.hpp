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

// Central finite-difference gradient checks, shared by the unit tests and
// the acceptance binary.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "namedis/autodiff.hpp"
#include "namedis/cluster.hpp"
#include "namedis/model.hpp"
#include "namedis/rng.hpp"

namespace namedis::testing {

using LossBuilder = std::function<ad::Var(ad::Tape&, std::span<const ad::Var>)>;
// Sign pattern of every piecewise-linear kink argument at the given parameter
// values; a change between the two ends of a stencil means it straddles a kink.
using KinkProbe = std::function<std::vector<bool>(const std::vector<ad::Matrix>&)>;

struct GradCheck {
  double max_rel_err = 0.0;
  double max_abs_err = 0.0;
  std::size_t entries = 0;
  std::size_t refined = 0;     // entries re-checked with a smaller step
  std::size_t unresolved = 0;  // entries still straddling a kink at the smallest step
  std::string worst;           // "<param>[r,c]"
};

// Relative error |a - n| / max(|a|, |n|, floor). The floor keeps entries whose
// true gradient is ~0 from dividing truncation noise by itself.
inline constexpr double kRelErrFloor = 1e-6;
inline constexpr double kSmallestStep = 1e-8;

inline GradCheck check_gradients(std::vector<ad::Matrix> params, const std::vector<std::string>& names,
                                 const LossBuilder& build, double step = 1e-4,
                                 const KinkProbe& probe = {}) {
  const auto evaluate = [&](const std::vector<ad::Matrix>& values, std::vector<ad::Matrix>* grads) {
    ad::Tape tape;
    std::vector<ad::Var> vars;
    for (const auto& v : values) vars.push_back(tape.variable(v));
    const ad::Var loss = build(tape, vars);
    if (grads) {
      tape.backward(loss);
      for (const auto& v : vars) {
        grads->push_back(v.grad().size() ? v.grad() : ad::Matrix::Zero(v.rows(), v.cols()));
      }
    }
    return loss.value()(0, 0);
  };

  std::vector<ad::Matrix> analytic;
  evaluate(params, &analytic);
  GradCheck out;
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (Eigen::Index r = 0; r < params[t].rows(); ++r) {
      for (Eigen::Index c = 0; c < params[t].cols(); ++c) {
        const double saved = params[t](r, c);
        double h = step;
        double up = 0.0;
        double down = 0.0;
        for (;;) {
          params[t](r, c) = saved + h;
          up = evaluate(params, nullptr);
          const auto sign_up = probe ? probe(params) : std::vector<bool>{};
          params[t](r, c) = saved - h;
          down = evaluate(params, nullptr);
          const auto sign_down = probe ? probe(params) : std::vector<bool>{};
          if (sign_up == sign_down) break;
          if (h / 10.0 < kSmallestStep) {
            ++out.unresolved;
            break;
          }
          if (h == step) ++out.refined;
          h /= 10.0;
        }
        params[t](r, c) = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double a = analytic[t](r, c);
        const double abs_err = std::abs(a - numeric);
        const double rel = abs_err / std::max({std::abs(a), std::abs(numeric), kRelErrFloor});
        out.max_abs_err = std::max(out.max_abs_err, abs_err);
        if (rel > out.max_rel_err) {
          out.max_rel_err = rel;
          out.worst = names[t] + "[" + std::to_string(r) + "," + std::to_string(c) + "]";
        }
        ++out.entries;
      }
    }
  }
  return out;
}

// Random connected-ish graph with self-loops.
inline Eigen::MatrixXd random_adjacency(int n, double p, Rng& rng) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) a(i, j) = a(j, i) = 1.0;
    }
  }
  return a;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, double scale, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform(-scale, scale);
  }
  return m;
}

struct JointProblem {
  GatConfig encoder;
  Eigen::MatrixXd features;
  Eigen::MatrixXd adjacency;
  Eigen::MatrixXd targets;  // pseudo-label adjacency, held fixed
  double lambda = 0.5;
  ModelParams params;
};

// Random n-node instance with random (not Xavier) parameters, including
// nonzero biases, so every gradient path is exercised.
inline JointProblem random_joint_problem(int n, std::uint64_t seed) {
  Rng rng(seed);
  JointProblem p;
  p.encoder.input_dim = 5;
  p.encoder.hidden1 = 6;
  p.encoder.hidden2 = 4;
  p.encoder.heads = 2;
  p.features = random_matrix(n, p.encoder.input_dim, 1.0, rng);
  p.adjacency = random_adjacency(n, 0.4, rng);
  ClusterLabels y;
  for (int i = 0; i < n; ++i) y.assignment.push_back(static_cast<int>(rng.below(3)) - 1);
  p.targets = labels_to_adjacency(y);
  const GatEncoder enc(p.encoder);
  p.params = init_params(enc, n, seed);
  for (Tensor* t : p.params.tensors()) t->value = random_matrix(t->value.rows(), t->value.cols(), 0.5, rng);
  return p;
}

inline GradCheck check_joint_problem(const JointProblem& p, double step = 1e-4) {
  ModelParams params = p.params;
  std::vector<ad::Matrix> values;
  std::vector<std::string> names;
  for (const Tensor* t : std::as_const(params).tensors()) {
    values.push_back(t->value);
    names.push_back(t->name);
  }
  const GatEncoder enc(p.encoder);
  const std::size_t n_enc = params.encoder.size();
  const auto bind_vars = [n_enc](std::span<const ad::Var> vars) {
    BoundParams bound;
    bound.encoder.assign(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(n_enc));
    bound.head = {vars[n_enc], vars[n_enc + 1]};
    return bound;
  };
  const KinkProbe probe = [&](const std::vector<ad::Matrix>& v) {
    ad::Tape tape;
    std::vector<ad::Var> vars;
    for (const auto& m : v) vars.push_back(tape.constant(m));
    AttentionTrace trace;
    enc.encode(tape, std::span(vars).first(n_enc), tape.constant(p.features), p.adjacency, &trace);
    std::vector<bool> signs;
    for (const auto& s : trace.scores) {
      for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (p.adjacency(k) != 0.0) signs.push_back(s(k) > 0.0);
      }
    }
    for (const auto& m : trace.pre_activation) {
      for (Eigen::Index k = 0; k < m.size(); ++k) signs.push_back(m(k) > 0.0);
    }
    return signs;
  };
  return check_gradients(
      values, names,
      [&](ad::Tape& tape, std::span<const ad::Var> vars) {
        const ForwardPass f = forward(tape, enc, bind_vars(vars), p.features, p.adjacency);
        const ad::Var lc = cluster_loss(f.cmat, p.targets);
        const ad::Var lr = recon_loss(f.a_logits, p.adjacency);
        return ad::add(ad::scale(lc, p.lambda), ad::scale(lr, 1.0 - p.lambda));
      },
      step, probe);
}

}  // namespace namedis::testing
