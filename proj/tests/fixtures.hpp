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

// Randomized instance generators shared by property tests and the
// acceptance binary.

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "namedis/cluster.hpp"
#include "namedis/corpus.hpp"
#include "namedis/rng.hpp"

namespace namedis::testing {

// Blobs around a few random centres plus uniform background and the odd
// zero row, so instances contain core, border and noise points.
inline Eigen::MatrixXd random_points(Rng& rng, int n, int d) {
  const int k = 1 + static_cast<int>(rng.below(5));
  Eigen::MatrixXd centres(k, d);
  for (int c = 0; c < k; ++c) {
    for (int j = 0; j < d; ++j) centres(c, j) = rng.uniform(-2.0, 2.0);
  }
  const double spread = rng.uniform(0.02, 0.6);
  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i) {
    const double roll = rng.uniform();
    if (roll < 0.02) {
      x.row(i).setZero();
    } else if (roll < 0.15) {
      for (int j = 0; j < d; ++j) x(i, j) = rng.uniform(-3.0, 3.0);
    } else {
      const auto c = static_cast<Eigen::Index>(rng.below(k));
      for (int j = 0; j < d; ++j) x(i, j) = centres(c, j) + spread * (rng.uniform() + rng.uniform() - 1.0);
    }
  }
  return x;
}

inline ClusterConfig random_cluster_config(Rng& rng) {
  ClusterConfig cfg;
  cfg.metric = rng.bernoulli(0.5) ? Metric::Cosine : Metric::Euclidean;
  cfg.eps = cfg.metric == Metric::Cosine ? rng.uniform(0.005, 0.3) : rng.uniform(0.05, 1.2);
  cfg.min_samples = 1 + static_cast<int>(rng.below(6));
  return cfg;
}

inline std::vector<int> random_partition(Rng& rng, int n, int k, bool outliers = false) {
  std::vector<int> y(n);
  for (int& v : y) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
  if (outliers) {
    for (int& v : y) {
      if (rng.bernoulli(0.2)) v = -1;
    }
  }
  return y;
}

inline std::vector<std::string> paper_ids(int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(1000 + i));
  return ids;
}

inline std::map<std::string, std::string> truth_of(const std::vector<std::string>& ids,
                                                   const std::vector<std::string>& authors) {
  std::map<std::string, std::string> t;
  for (std::size_t i = 0; i < ids.size(); ++i) t[ids[i]] = authors[i];
  return t;
}

inline std::vector<std::string> as_authors(const std::vector<int>& y) {
  std::vector<std::string> out;
  for (int v : y) out.push_back("a" + std::to_string(v));
  return out;
}

// Random bijective relabelling of non-negative labels; -1 stays put.
inline ClusterLabels rename_labels(const ClusterLabels& y, Rng& rng) {
  int k = 0;
  for (int v : y.assignment) k = std::max(k, v + 1);
  std::vector<int> map(k);
  for (int i = 0; i < k; ++i) map[i] = 3 * i + 7;
  rng.shuffle(map.begin(), map.end());
  ClusterLabels out = y;
  for (int& v : out.assignment) {
    if (v >= 0) v = map[v];
  }
  return out;
}

}  // namespace namedis::testing
