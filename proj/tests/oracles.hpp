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

// Independent reference implementations used only by tests. None of these
// call into the code paths they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "namedis/cluster.hpp"
#include "namedis/metrics.hpp"

namespace namedis::oracle {

inline double distance(const Eigen::MatrixXd& x, int i, int j, Metric metric) {
  const auto d = x.cols();
  if (metric == Metric::Euclidean) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) s += (x(i, k) - x(j, k)) * (x(i, k) - x(j, k));
    return std::sqrt(s);
  }
  double ni = 0.0, nj = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    ni += x(i, k) * x(i, k);
    nj += x(j, k) * x(j, k);
  }
  ni = std::sqrt(ni);
  nj = std::sqrt(nj);
  if (!(ni > 0.0) || !(nj > 0.0)) return std::numeric_limits<double>::infinity();
  if (i == j) return 0.0;
  double dot = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) dot += (x(i, k) / ni) * (x(j, k) / nj);
  return 1.0 - dot;
}

/// Textbook density clustering: core points, connected components of the
/// core-core eps graph, border points to the component whose smallest core
/// index is lowest among their core neighbours.
inline std::vector<int> dbscan(const Eigen::MatrixXd& x, double eps, int min_samples, Metric metric) {
  const int n = static_cast<int>(x.rows());
  std::vector<std::vector<bool>> near(n, std::vector<bool>(n, false));
  std::vector<bool> core(n, false);
  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (int j = 0; j < n; ++j) {
      near[i][j] = distance(x, i, j, metric) <= eps;
      count += near[i][j] ? 1 : 0;
    }
    core[i] = count >= min_samples;
  }
  std::vector<int> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  // Repeated min-label propagation until fixpoint: slow and obviously correct.
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      if (!core[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (core[j] && near[i][j] && comp[j] < comp[i]) {
          comp[i] = comp[j];
          changed = true;
        }
      }
    }
  }
  std::vector<int> raw(n, -1);
  for (int i = 0; i < n; ++i) {
    if (core[i]) {
      raw[i] = comp[i];
      continue;
    }
    int best = std::numeric_limits<int>::max();
    for (int j = 0; j < n; ++j) {
      if (core[j] && near[i][j]) best = std::min(best, comp[j]);
    }
    if (best != std::numeric_limits<int>::max()) raw[i] = best;
  }
  std::map<int, int> rename;
  for (int& y : raw) {
    if (y < 0) continue;
    y = rename.try_emplace(y, static_cast<int>(rename.size())).first->second;
  }
  return raw;
}

struct PairCounts {
  std::uint64_t pred = 0, truth = 0, hit = 0;
};

/// Enumerates every unordered pair.
inline PairCounts enumerate_pairs(const std::vector<int>& pred, const std::vector<std::string>& truth) {
  PairCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = i + 1; j < pred.size(); ++j) {
      const bool p = pred[i] == pred[j];
      const bool t = truth[i] == truth[j];
      c.pred += p;
      c.truth += t;
      c.hit += p && t;
    }
  }
  return c;
}

/// Pair counts with the degenerate-denominator rules applied.
inline PairwiseMetrics oracle_prf(const std::vector<int>& pred, const std::vector<std::string>& authors) {
  const auto c = enumerate_pairs(pred, authors);
  PairwiseMetrics m;
  m.pred_pairs = c.pred;
  m.true_pairs = c.truth;
  m.hit_pairs = c.hit;
  if (c.pred == 0 && c.truth == 0) {
    m.precision = m.recall = m.f1 = 1.0;
    return m;
  }
  m.precision = c.pred == 0 ? 0.0 : static_cast<double>(c.hit) / static_cast<double>(c.pred);
  m.recall = c.truth == 0 ? 1.0 : static_cast<double>(c.hit) / static_cast<double>(c.truth);
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

inline double binary_cross_entropy(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y, double eps) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      const double q = std::min(std::max(p(i, j), eps), 1.0 - eps);
      total += -(y(i, j) * std::log(q) + (1.0 - y(i, j)) * std::log(1.0 - q));
    }
  }
  return total / static_cast<double>(p.size());
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Head {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;  // out
  Eigen::VectorXd c;  // 2 out
};

/// Scalar-loop attention layer: heads concatenated, optional ELU(alpha = 1).
inline Eigen::MatrixXd gat_layer(const Eigen::MatrixXd& h, const Eigen::MatrixXd& adj,
                                 const std::vector<Head>& heads, bool activate, double slope,
                                 std::vector<Eigen::MatrixXd>* alphas = nullptr) {
  const int n = static_cast<int>(h.rows());
  int total = 0;
  for (const auto& hd : heads) total += static_cast<int>(hd.w.rows());
  Eigen::MatrixXd out(n, total);
  int offset = 0;
  for (const auto& hd : heads) {
    const int o = static_cast<int>(hd.w.rows());
    const int in = static_cast<int>(hd.w.cols());
    std::vector<std::vector<double>> z(n, std::vector<double>(o, 0.0));
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < o; ++r)
        for (int k = 0; k < in; ++k) z[i][r] += hd.w(r, k) * h(i, k);
    Eigen::MatrixXd alpha = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      std::vector<double> e(n, 0.0);
      double denom = 0.0;
      for (int j = 0; j < n; ++j) {
        if (adj(i, j) == 0.0) continue;
        double s = 0.0;
        for (int r = 0; r < o; ++r) s += hd.c(r) * z[i][r] + hd.c(o + r) * z[j][r];
        s = s > 0 ? s : slope * s;
        e[j] = std::exp(s);
        denom += e[j];
      }
      for (int j = 0; j < n; ++j) alpha(i, j) = adj(i, j) == 0.0 ? 0.0 : e[j] / denom;
    }
    for (int i = 0; i < n; ++i) {
      for (int r = 0; r < o; ++r) {
        double s = hd.b(r);
        for (int j = 0; j < n; ++j) s += alpha(i, j) * z[j][r];
        out(i, offset + r) = activate ? (s > 0 ? s : std::exp(s) - 1.0) : s;
      }
    }
    if (alphas) alphas->push_back(alpha);
    offset += o;
  }
  return out;
}

}  // namespace namedis::oracle
