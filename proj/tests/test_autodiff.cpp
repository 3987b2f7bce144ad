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

#include <gtest/gtest.h>

#include "gradcheck.hpp"

namespace namedis::ad {
namespace {

using namedis::testing::check_gradients;
using namedis::testing::random_matrix;

// Scalar reduction u^T X v via constant weights, so every op can be checked
// through a 1x1 root.
Var reduce(Tape& t, Var x, Rng& rng) {
  const Var u = t.constant(random_matrix(1, x.rows(), 1.0, rng));
  const Var v = t.constant(random_matrix(x.cols(), 1, 1.0, rng));
  return matmul(matmul(u, x), v);
}

struct OpCase {
  const char* name;
  std::vector<std::pair<int, int>> shapes;
  std::function<Var(Tape&, std::span<const Var>)> op;
};

class OpGradient : public ::testing::TestWithParam<int> {};

std::vector<OpCase> op_cases() {
  return {
      {"matmul", {{3, 4}, {4, 2}}, [](Tape&, std::span<const Var> v) { return matmul(v[0], v[1]); }},
      {"matmul_nt", {{3, 4}, {5, 4}}, [](Tape&, std::span<const Var> v) { return matmul_nt(v[0], v[1]); }},
      {"add", {{3, 2}, {3, 2}}, [](Tape&, std::span<const Var> v) { return add(v[0], v[1]); }},
      {"add_row", {{4, 3}, {1, 3}}, [](Tape&, std::span<const Var> v) { return add_row(v[0], v[1]); }},
      {"scale", {{2, 3}}, [](Tape&, std::span<const Var> v) { return scale(v[0], -1.7); }},
      {"elu", {{4, 4}}, [](Tape&, std::span<const Var> v) { return elu(v[0]); }},
      {"sigmoid", {{3, 3}}, [](Tape&, std::span<const Var> v) { return sigmoid(v[0]); }},
      {"concat_cols", {{3, 2}, {3, 1}, {3, 3}},
       [](Tape&, std::span<const Var> v) { return concat_cols(v); }},
      {"transpose", {{3, 2}},
       [](Tape&, std::span<const Var> v) { return transpose(v[0]); }},
      {"attention", {{5, 3}, {6, 1}},
       [](Tape&, std::span<const Var> v) {
         Matrix mask = Matrix::Identity(5, 5);
         mask(0, 1) = mask(1, 0) = mask(1, 2) = mask(2, 1) = mask(3, 4) = mask(4, 3) = mask(0, 4) = 1;
         return attention(v[0], v[1], mask, 0.2);
       }},
      {"bce_of_sigmoid", {{3, 4}},
       [](Tape&, std::span<const Var> v) {
         Matrix y(3, 4);
         y << 1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0;
         return binary_cross_entropy(sigmoid(v[0]), y, 1e-7);
       }},
      {"logistic_cross_entropy", {{4, 3}},
       [](Tape&, std::span<const Var> v) {
         Matrix y(4, 3);
         y << 1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0;
         return logistic_cross_entropy(scale(v[0], 3.0), y);
       }},
  };
}

TEST_P(OpGradient, MatchesCentralDifferences) {
  const OpCase c = op_cases()[GetParam()];
  Rng rng(1000 + GetParam());
  std::vector<Matrix> values;
  std::vector<std::string> names;
  for (auto [r, k] : c.shapes) {
    values.push_back(random_matrix(r, k, 1.0, rng));
    names.push_back(c.name);
  }
  const std::uint64_t reduce_seed = rng.next();
  const auto result = check_gradients(values, names, [&](Tape& t, std::span<const Var> v) {
    Rng local(reduce_seed);
    const Var out = c.op(t, v);
    return out.rows() == 1 && out.cols() == 1 ? out : reduce(t, out, local);
  });
  EXPECT_LE(result.max_rel_err, 1e-6) << c.name << " worst " << result.worst;
}

INSTANTIATE_TEST_SUITE_P(AllOps, OpGradient, ::testing::Range(0, 12), [](const auto& info) {
  return std::string(op_cases()[info.param].name);
});

TEST(Tape, ConstantsReceiveNoGradient) {
  Tape t;
  const Var a = t.variable(Matrix::Constant(2, 2, 1.0));
  const Var k = t.constant(Matrix::Constant(2, 2, 3.0));
  const Var s = binary_cross_entropy(sigmoid(add(a, k)), Matrix::Ones(2, 2), 1e-7);
  t.backward(s);
  EXPECT_EQ(k.grad().size(), 0);
  EXPECT_EQ(a.grad().rows(), 2);
}

TEST(Tape, BackwardRequiresScalarRoot) {
  Tape t;
  const Var a = t.variable(Matrix::Ones(2, 2));
  EXPECT_THROW(t.backward(a), std::logic_error);
}

TEST(Tape, GradientsAccumulateOverReuse) {
  // f(a) = u^T (a + a) v  =>  df/da = 2 u v^T
  Tape t;
  const Var a = t.variable(Matrix::Ones(2, 3));
  const Var u = t.constant(Matrix::Constant(1, 2, 1.0));
  const Var v = t.constant(Matrix::Constant(3, 1, 1.0));
  t.backward(matmul(matmul(u, add(a, a)), v));
  EXPECT_EQ(a.grad(), Matrix::Constant(2, 3, 2.0));
}

TEST(BinaryCrossEntropy, ClampedEntriesPassNoGradient) {
  Tape t;
  Matrix p(1, 2);
  p << 0.0, 0.5;
  const Var v = t.variable(p);
  const Var loss = binary_cross_entropy(v, Matrix::Ones(1, 2), 1e-7);
  EXPECT_NEAR(loss.value()(0, 0), (-std::log(1e-7) - std::log(0.5)) / 2.0, 1e-12);
  t.backward(loss);
  EXPECT_EQ(v.grad()(0, 0), 0.0);
  EXPECT_NEAR(v.grad()(0, 1), -1.0, 1e-12);  // -(1/q)/count with q = 0.5, count = 2
}

TEST(LogisticCrossEntropy, MatchesComposedOpsOffSaturation) {
  Rng rng(77);
  const Matrix x = random_matrix(5, 5, 4.0, rng);
  Matrix y = Matrix::Zero(5, 5);
  for (int k = 0; k < 25; ++k) y(k) = rng.bernoulli(0.5);
  Tape t;
  const Var a = t.variable(x);
  const Var fused = logistic_cross_entropy(a, y);
  t.backward(fused);
  const Matrix g_fused = a.grad();
  Tape u;
  const Var b = u.variable(x);
  const Var composed = binary_cross_entropy(sigmoid(b), y, 1e-7);
  u.backward(composed);
  EXPECT_NEAR(fused.value()(0, 0), composed.value()(0, 0), 1e-14);
  EXPECT_LT((g_fused - b.grad()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Attention, IsolatedNodeIsAnError) {
  Tape t;
  const Var z = t.variable(Matrix::Ones(2, 1));
  const Var c = t.variable(Matrix::Ones(2, 1));
  Matrix mask = Matrix::Zero(2, 2);
  mask(0, 0) = 1.0;
  EXPECT_THROW(attention(z, c, mask, 0.2), std::domain_error);
}

}  // namespace
}  // namespace namedis::ad
