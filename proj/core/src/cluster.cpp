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

#include "namedis/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace namedis {

std::string_view metric_name(Metric m) { return m == Metric::Cosine ? "cosine" : "euclidean"; }

Metric parse_metric(std::string_view name) {
  if (name == "cosine") return Metric::Cosine;
  if (name == "euclidean") return Metric::Euclidean;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

void ClusterConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be positive");
  if (min_samples < 1) throw std::invalid_argument("min_samples must be >= 1");
}

Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& points, Metric metric) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd dist(n, n);
  if (metric == Metric::Euclidean) {
    for (Eigen::Index i = 0; i < n; ++i) {
      dist(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < d; ++k) {
          const double diff = points(i, k) - points(j, k);
          s += diff * diff;
        }
        dist(i, j) = dist(j, i) = std::sqrt(s);
      }
    }
    return dist;
  }

  Eigen::MatrixXd unit(n, d);
  std::vector<bool> zero(n, false);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) s += points(i, k) * points(i, k);
    const double norm = std::sqrt(s);
    zero[i] = !(norm > 0.0);
    for (Eigen::Index k = 0; k < d; ++k) unit(i, k) = zero[i] ? 0.0 : points(i, k) / norm;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    dist(i, i) = zero[i] ? kInf : 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (zero[i] || zero[j]) {
        dist(i, j) = dist(j, i) = kInf;
        continue;
      }
      double dot = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) dot += unit(i, k) * unit(j, k);
      dist(i, j) = dist(j, i) = 1.0 - dot;
    }
  }
  return dist;
}

ClusterLabels dbscan(const Eigen::MatrixXd& points, const ClusterConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<int>(points.rows());
  const Eigen::MatrixXd dist = distance_matrix(points, cfg.metric);

  std::vector<std::vector<int>> neighbours(n);
  std::vector<bool> core(n, false);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (dist(i, j) <= cfg.eps) neighbours[i].push_back(j);
    }
    core[i] = static_cast<int>(neighbours[i].size()) >= cfg.min_samples;
  }

  constexpr int kUnvisited = -2;
  std::vector<int> label(n, kUnvisited);
  int next = 0;
  std::deque<int> frontier;
  for (int i = 0; i < n; ++i) {
    if (label[i] != kUnvisited || !core[i]) continue;
    const int id = next++;
    label[i] = id;
    frontier.push_back(i);
    while (!frontier.empty()) {
      const int p = frontier.front();
      frontier.pop_front();
      for (int q : neighbours[p]) {
        if (label[q] != kUnvisited) continue;
        label[q] = id;
        if (core[q]) frontier.push_back(q);
      }
    }
  }
  ClusterLabels out;
  out.assignment.resize(n);
  for (int i = 0; i < n; ++i) out.assignment[i] = label[i] == kUnvisited ? -1 : label[i];
  return canonicalize(out);
}

Eigen::MatrixXd labels_to_adjacency(const ClusterLabels& labels) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd y(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      y(i, j) = labels.assignment[i] == labels.assignment[j] ? 1.0 : 0.0;
    }
  }
  return y;
}

ClusterLabels finalize_labels(const ClusterLabels& labels) {
  int next = 0;
  for (int y : labels.assignment) next = std::max(next, y + 1);
  ClusterLabels out = labels;
  for (int& y : out.assignment) {
    if (y < 0) y = next++;
  }
  return out;
}

bool same_partition(const ClusterLabels& a, const ClusterLabels& b) {
  return a.size() == b.size() && canonicalize(a) == canonicalize(b);
}

}  // namespace namedis
