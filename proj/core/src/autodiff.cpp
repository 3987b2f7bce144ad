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

#include "namedis/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace namedis::ad {

const Matrix& Var::value() const { return tape_->value(id_); }
const Matrix& Var::grad() const { return tape_->grad(id_); }

Var Tape::variable(Matrix value) {
  nodes_.push_back({std::move(value), Matrix(), true, nullptr});
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::constant(Matrix value) {
  nodes_.push_back({std::move(value), Matrix(), false, nullptr});
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::push(Matrix value, std::span<const Var> parents, Pullback pullback) {
  bool needs = false;
  for (const auto& p : parents) {
    if (p.tape() != this) throw std::logic_error("operand recorded on a different tape");
    needs = needs || nodes_[p.id()].requires_grad;
  }
  nodes_.push_back({std::move(value), Matrix(), needs, needs ? std::move(pullback) : nullptr});
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

void Tape::accumulate(int id, const Matrix& g) {
  auto& node = nodes_[id];
  if (!node.requires_grad) return;
  if (node.grad.size() == 0) {
    node.grad = g;
  } else {
    node.grad += g;
  }
}

void Tape::backward(Var root) {
  if (root.tape() != this) throw std::logic_error("root recorded on a different tape");
  if (root.rows() != 1 || root.cols() != 1) throw std::logic_error("backward needs a scalar root");
  for (auto& n : nodes_) n.grad.resize(0, 0);
  accumulate(root.id(), Matrix::Ones(1, 1));
  for (int id = root.id(); id >= 0; --id) {
    auto& node = nodes_[id];
    if (node.pullback && node.grad.size() != 0) node.pullback(*this, id);
  }
}

namespace {

void check_same_shape(const Var& a, const Var& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

Var matmul(Var a, Var b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  Tape& t = *a.tape();
  const int ia = a.id();
  const int ib = b.id();
  return t.push(a.value() * b.value(), {a, b}, [ia, ib](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(ia)) t.accumulate(ia, g * t.value(ib).transpose());
    if (t.requires_grad(ib)) t.accumulate(ib, t.value(ia).transpose() * g);
  });
}

Var matmul_nt(Var a, Var b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: column counts differ");
  Tape& t = *a.tape();
  const int ia = a.id();
  const int ib = b.id();
  return t.push(a.value() * b.value().transpose(), {a, b}, [ia, ib](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(ia)) t.accumulate(ia, g * t.value(ib));
    if (t.requires_grad(ib)) t.accumulate(ib, g.transpose() * t.value(ia));
  });
}

Var add(Var a, Var b) {
  check_same_shape(a, b, "add");
  Tape& t = *a.tape();
  const int ia = a.id();
  const int ib = b.id();
  return t.push(a.value() + b.value(), {a, b}, [ia, ib](Tape& t, int self) {
    const Matrix g = t.grad(self);
    t.accumulate(ia, g);
    t.accumulate(ib, g);
  });
}

Var add_row(Var a, Var bias) {
  if (bias.rows() != 1 || bias.cols() != a.cols()) throw std::invalid_argument("add_row: bias shape");
  Tape& t = *a.tape();
  const int ia = a.id();
  const int ib = bias.id();
  Matrix out = a.value();
  out.rowwise() += bias.value().row(0);
  return t.push(std::move(out), {a, bias}, [ia, ib](Tape& t, int self) {
    const Matrix g = t.grad(self);
    t.accumulate(ia, g);
    if (t.requires_grad(ib)) t.accumulate(ib, g.colwise().sum());
  });
}

Var scale(Var a, double s) {
  Tape& t = *a.tape();
  const int ia = a.id();
  return t.push(a.value() * s, {a},
                [ia, s](Tape& t, int self) { t.accumulate(ia, t.grad(self) * s); });
}

Var elu(Var a, double alpha) {
  Tape& t = *a.tape();
  const int ia = a.id();
  Matrix out = a.value().unaryExpr(
      [alpha](double x) { return x > 0.0 ? x : alpha * std::expm1(x); });
  return t.push(std::move(out), {a}, [ia, alpha](Tape& t, int self) {
    const Matrix& x = t.value(ia);
    const Matrix d = x.unaryExpr([alpha](double v) { return v > 0.0 ? 1.0 : alpha * std::exp(v); });
    t.accumulate(ia, t.grad(self).cwiseProduct(d));
  });
}

Var sigmoid(Var a) {
  Tape& t = *a.tape();
  const int ia = a.id();
  Matrix out = a.value().unaryExpr([](double x) {
    // Split by sign so exp never overflows.
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  });
  return t.push(std::move(out), {a}, [ia](Tape& t, int self) {
    const Matrix& y = t.value(self);
    t.accumulate(ia, t.grad(self).cwiseProduct(y.cwiseProduct((1.0 - y.array()).matrix())));
  });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no parts");
  Tape& t = *parts.front().tape();
  const Eigen::Index rows = parts.front().rows();
  Eigen::Index cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw std::invalid_argument("concat_cols: row counts differ");
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::vector<int> ids;
  std::vector<Eigen::Index> widths;
  Eigen::Index offset = 0;
  for (const auto& p : parts) {
    out.middleCols(offset, p.cols()) = p.value();
    offset += p.cols();
    ids.push_back(p.id());
    widths.push_back(p.cols());
  }
  return t.push(std::move(out), parts, [ids, widths](Tape& t, int self) {
    const Matrix& g = t.grad(self);
    Eigen::Index off = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      t.accumulate(ids[k], g.middleCols(off, widths[k]));
      off += widths[k];
    }
  });
}

Var transpose(Var a) {
  Tape& t = *a.tape();
  const int ia = a.id();
  return t.push(a.value().transpose(), {a},
                [ia](Tape& t, int self) { t.accumulate(ia, t.grad(self).transpose()); });
}

Var attention(Var z, Var c, const Matrix& mask, double negative_slope) {
  const Eigen::Index n = z.rows();
  const Eigen::Index o = z.cols();
  if (c.rows() != 2 * o || c.cols() != 1) throw std::invalid_argument("attention: vector shape");
  if (mask.rows() != n || mask.cols() != n) throw std::invalid_argument("attention: mask shape");
  Tape& t = *z.tape();

  const Eigen::VectorXd src = z.value() * c.value().topRows(o);
  const Eigen::VectorXd dst = z.value() * c.value().bottomRows(o);
  Matrix pre(n, n);
  Matrix alpha = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double top = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = src[i] + dst[j];
      pre(i, j) = x;
      if (mask(i, j) != 0.0) top = std::max(top, x > 0.0 ? x : negative_slope * x);
    }
    if (!std::isfinite(top)) {
      throw std::domain_error("attention: node " + std::to_string(i) + " has no neighbours");
    }
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (mask(i, j) == 0.0) continue;
      const double e = pre(i, j) > 0.0 ? pre(i, j) : negative_slope * pre(i, j);
      alpha(i, j) = std::exp(e - top);
      total += alpha(i, j);
    }
    alpha.row(i) /= total;
  }

  const int iz = z.id();
  const int ic = c.id();
  return t.push(std::move(alpha), {z, c},
                [iz, ic, o, pre = std::move(pre), negative_slope](Tape& t, int self) {
                  const Matrix& a = t.value(self);
                  const Matrix& g = t.grad(self);
                  // Softmax pullback row by row, then through the LeakyReLU.
                  const Eigen::VectorXd inner = a.cwiseProduct(g).rowwise().sum();
                  Matrix d_pre = a.cwiseProduct(g - inner.replicate(1, g.cols()));
                  for (Eigen::Index i = 0; i < d_pre.rows(); ++i) {
                    for (Eigen::Index j = 0; j < d_pre.cols(); ++j) {
                      if (pre(i, j) <= 0.0) d_pre(i, j) *= negative_slope;
                    }
                  }
                  const Eigen::VectorXd d_src = d_pre.rowwise().sum();
                  const Eigen::VectorXd d_dst = d_pre.colwise().sum().transpose();
                  const Matrix& zv = t.value(iz);
                  const Matrix& cv = t.value(ic);
                  if (t.requires_grad(iz)) {
                    t.accumulate(iz, d_src * cv.topRows(o).transpose() +
                                         d_dst * cv.bottomRows(o).transpose());
                  }
                  if (t.requires_grad(ic)) {
                    Matrix dc(2 * o, 1);
                    dc.topRows(o) = zv.transpose() * d_src;
                    dc.bottomRows(o) = zv.transpose() * d_dst;
                    t.accumulate(ic, dc);
                  }
                });
}

Var binary_cross_entropy(Var p, const Matrix& target, double eps) {
  if (target.rows() != p.rows() || target.cols() != p.cols()) {
    throw std::invalid_argument("binary_cross_entropy: shape mismatch");
  }
  Tape& t = *p.tape();
  const Matrix& pv = p.value();
  const double count = static_cast<double>(pv.size());
  double sum = 0.0;
  for (Eigen::Index k = 0; k < pv.size(); ++k) {
    const double q = std::clamp(pv(k), eps, 1.0 - eps);
    const double y = target(k);
    sum -= y * std::log(q) + (1.0 - y) * std::log(1.0 - q);
  }
  const int ip = p.id();
  return t.push(Matrix::Constant(1, 1, sum / count), {p},
                [ip, target, eps, count](Tape& t, int self) {
                  const Matrix& pv = t.value(ip);
                  const double g = t.grad(self)(0, 0);
                  Matrix d(pv.rows(), pv.cols());
                  for (Eigen::Index k = 0; k < pv.size(); ++k) {
                    const double q = pv(k);
                    const double y = target(k);
                    d(k) = (q <= eps || q >= 1.0 - eps)
                               ? 0.0
                               : -g * (y / q - (1.0 - y) / (1.0 - q)) / count;
                  }
                  t.accumulate(ip, d);
                });
}

Var logistic_cross_entropy(Var logits, const Matrix& target) {
  if (target.rows() != logits.rows() || target.cols() != logits.cols()) {
    throw std::invalid_argument("logistic_cross_entropy: shape mismatch");
  }
  Tape& t = *logits.tape();
  const Matrix& x = logits.value();
  const Matrix prob = x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  const double count = static_cast<double>(x.size());
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    // -[y log s(x) + (1 - y) log(1 - s(x))] = max(x, 0) - x y + log(1 + e^-|x|)
    sum += std::max(x(k), 0.0) - x(k) * target(k) + std::log1p(std::exp(-std::abs(x(k))));
  }
  const int ix = logits.id();
  return t.push(Matrix::Constant(1, 1, sum / count), {logits},
                [ix, prob, target, count](Tape& t, int self) {
                  t.accumulate(ix, (t.grad(self)(0, 0) / count) * (prob - target));
                });
}

}  // namespace namedis::ad
